#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fraclog::cli {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Flat "key = value" text; '#' starts a comment, blank lines are skipped.
// Throws InputError with the line number on malformed lines.
KeyValues read_config_file(const std::string& path);

// Rebuilds argv so that config entries become "--key value" pairs placed right
// after the subcommand, ahead of the user's own flags (which therefore win).
// The "--config" flag itself is removed.
std::vector<std::string> merge_config(const std::vector<std::string>& argv, const std::vector<std::string>& subcommands);

std::vector<double> parse_double_list(const std::string& text, const std::string& what);
std::vector<int> parse_int_list(const std::string& text, const std::string& what);

}  // namespace fraclog::cli
