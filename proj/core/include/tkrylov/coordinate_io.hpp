#pragma once

#include <iosfwd>
#include <string>

#include "tkrylov/sparse_tensor.hpp"

namespace tkrylov {

// Sparse coordinate text format:
//   # comment lines start with '#'
//   l m n nnz
//   i j k value          (nnz lines, 1-based indices)
// The writer emits entries sorted by (k,j,i) and round-trips values exactly.

SparseTensor3 read_coordinate(std::istream& in,
                              SparseTensor3::DuplicatePolicy policy =
                                  SparseTensor3::DuplicatePolicy::sum);
SparseTensor3 read_coordinate_file(const std::string& path,
                                   SparseTensor3::DuplicatePolicy policy =
                                       SparseTensor3::DuplicatePolicy::sum);

void write_coordinate(std::ostream& out, const SparseTensor3& A);
void write_coordinate_file(const std::string& path, const SparseTensor3& A);

/// Writes a dense tensor in the same format, listing every nonzero entry.
void write_coordinate(std::ostream& out, const DenseTensor3& A);
void write_coordinate_file(const std::string& path, const DenseTensor3& A);

}  // namespace tkrylov
