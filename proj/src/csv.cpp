#include "su11/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace su11 {

std::string format_double(double value) {
  // -0 prints as 0.
  if (value == 0.0) value = 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

}  // namespace su11
