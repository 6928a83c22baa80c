#include "trinfo/distributions.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace trinfo {

namespace {

void check_simplex(const double* p, int n, double tolerance) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(p[i] >= -1e-15)) {
      throw std::invalid_argument("distribution has a negative probability");
    }
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > tolerance) {
    throw std::invalid_argument("distribution does not sum to 1");
  }
}

}  // namespace

Vector2 PairDistribution::marginal(int var) const {
  Vector2 m = Vector2::Zero();
  for (int s = 0; s < kPairStates; ++s) {
    m[(s >> var) & 1] += probs[s];
  }
  return m;
}

void PairDistribution::validate() const {
  check_simplex(probs.data(), kPairStates, 1e-12);
}

Vector2 TripletDistribution::marginal(int var) const {
  Vector2 m = Vector2::Zero();
  for (int s = 0; s < kTripletStates; ++s) {
    m[(s >> var) & 1] += probs[s];
  }
  return m;
}

Vector4 TripletDistribution::pair_marginal(int a, int b) const {
  Vector4 m = Vector4::Zero();
  for (int s = 0; s < kTripletStates; ++s) {
    m[((s >> a) & 1) | (((s >> b) & 1) << 1)] += probs[s];
  }
  return m;
}

PairDistribution TripletDistribution::pair(int a, int b) const {
  return PairDistribution{pair_marginal(a, b), sample_count};
}

TripletDistribution TripletDistribution::permuted(
    const std::array<int, 3>& perm) const {
  TripletDistribution out;
  out.sample_count = sample_count;
  for (int s = 0; s < kTripletStates; ++s) {
    int target = 0;
    for (int t = 0; t < 3; ++t) {
      target |= ((s >> t) & 1) << perm[t];
    }
    out.probs[target] = probs[s];
  }
  return out;
}

void TripletDistribution::validate() const {
  check_simplex(probs.data(), kTripletStates, 1e-12);
}

std::string TripletDistribution::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (int s = 0; s < kTripletStates; ++s) arr.push_back(probs[s]);
  return arr.dump();
}

TripletDistribution TripletDistribution::from_json(const std::string& text) {
  nlohmann::json arr = nlohmann::json::parse(text);
  if (!arr.is_array() || arr.size() != kTripletStates) {
    throw std::invalid_argument(
        "triplet distribution JSON must be an array of 8 probabilities");
  }
  TripletDistribution out;
  for (int s = 0; s < kTripletStates; ++s) out.probs[s] = arr[s].get<double>();
  out.validate();
  return out;
}

TripletDistribution uniform_triplet() {
  TripletDistribution out;
  out.probs.setConstant(1.0 / kTripletStates);
  return out;
}

}  // namespace trinfo
