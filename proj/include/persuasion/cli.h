#ifndef PERSUASION_CLI_H_
#define PERSUASION_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace persuasion {

// Exit codes of the command-line front end.
enum ExitCode {
  kExitPass = 0,
  kExitFail = 1,   // verdict false; a witness is reported
  kExitUsage = 2,  // usage or parse error
  kExitNumeric = 3,
};

// args excludes the program name.
int Dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int Dispatch(int argc, char** argv);

}  // namespace persuasion

#endif  // PERSUASION_CLI_H_
