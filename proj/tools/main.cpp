#include "hdqi_cli/app.hpp"

int main(int argc, char** argv) { return hdqi::cli::run(argc, argv); }
