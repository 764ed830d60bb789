// Copyright 2026 vidlang authors
// vidlang executable entry point.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/cli.hpp"

int main(int argc, char** argv) { return vidlang::run_command(argc, argv); }
