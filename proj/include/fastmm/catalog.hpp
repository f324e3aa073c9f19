#pragma once

#include "fastmm/bilinear.hpp"

#include <string>
#include <vector>

namespace fastmm::catalog {

// Every constructor verifies its result against the target tensor before
// returning it; a transcription error throws VerificationError.

/// Strassen's rank-7 algorithm for MM(2). 18 additions when applied directly.
BilinearAlgorithm strassen();

/// Winograd's rank-7 variant for MM(2), carrying the 15-addition schedule
/// (4 additions for the A-forms, 4 for the B-forms, 7 for recombination).
BilinearAlgorithm winograd_mm2();

/// Rank-3 algorithm for (a1 + i a2)(b1 + i b2); output (real, imaginary).
BilinearAlgorithm complex_mult();
TargetTensor complex_mult_target();

/// Rank-mkn textbook algorithm; term q = (i*k + j)*n + h computes a_ij b_jh.
BilinearAlgorithm straightforward(std::size_t m, std::size_t k, std::size_t n);

/// Lookup by name: strassen, winograd, complex_mult, or straightforward:m,k,n.
BilinearAlgorithm by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace fastmm::catalog
