#include <nlqk/cli.hpp>

int main(int argc, char** argv) { return nlqk::run_cli(argc, argv); }
