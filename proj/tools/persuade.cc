#include "persuasion/cli.h"

int main(int argc, char** argv) { return persuasion::Dispatch(argc, argv); }
