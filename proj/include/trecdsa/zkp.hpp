#pragma once

#include "trecdsa/zkp/commitment.hpp"
#include "trecdsa/zkp/factorization.hpp"
#include "trecdsa/zkp/range_proof.hpp"
#include "trecdsa/zkp/schnorr.hpp"
