// Text serialization of frames.
//
// Header `telet-frame v1 field=<real|complex> d=<d> N=<N>`, then N lines of
// d comma-separated entries, one line per column. Complex entries are
// `<re>:<im>`; all numbers carry 17 significant digits. Lines starting with
// '#' are comments.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "telet/frame.hpp"

namespace telet {

class FrameFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_frame(const Frame& frame, std::ostream& out);
void write_frame(const Frame& frame, const std::filesystem::path& path);

Frame read_frame(std::istream& in);
Frame read_frame(const std::filesystem::path& path);

}  // namespace telet
