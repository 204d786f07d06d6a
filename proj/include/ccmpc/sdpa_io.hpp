#pragma once

#include <string>

#include "ccmpc/sdp.hpp"

namespace ccmpc {

// SDPA sparse interchange text (".dat-s" layout):
//   line 1: m                      number of decision variables
//   line 2: nblocks               PSD blocks; scalar rows form one diagonal block
//   line 3: block sizes           negative size marks a diagonal block
//   line 4: objective row         m coefficients
//   then:   <mat> <blk> <i> <j> <value>   with mat 0 the constant matrix
// in the convention  minimize c.x  s.t.  sum_i x_i F_i - F0  PSD.
// A "*offset <v>" comment carries the objective constant across round trips.
// Equality rows are not representable; eliminate them first.
std::string write_sdpa(const SdpProblem& problem);
void write_sdpa_file(const SdpProblem& problem, const std::string& path);

SdpProblem read_sdpa(const std::string& text);
SdpProblem read_sdpa_file(const std::string& path);

}  // namespace ccmpc
