#pragma once

#include <map>
#include <string>
#include <string_view>

namespace llmap::prompts {

std::string_view parser_system();
std::string_view parser_user();
std::string_view parser_system_cot();
std::string_view parser_user_cot();
std::string_view instruction_system();
std::string_view instruction_user();

/// Replaces every "{name}" placeholder with its value; unknown braces stay.
std::string fill(std::string_view tmpl, const std::map<std::string, std::string>& values);

}  // namespace llmap::prompts
