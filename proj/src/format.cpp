#include "viamdp/format.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace viamdp {

std::string format_double(double value) {
    std::array<char, 32> buf;
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

}  // namespace viamdp
