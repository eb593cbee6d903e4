#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adjbraid/exactla.hpp"

namespace adjbraid {

inline constexpr std::uint64_t kDefaultSeed = 20190917;

/// n! [x^n] -log(2 - e^x), by exact truncated series arithmetic. 1 <= n <= 12.
Integer zie_dimension(int n);

/// One checkable instance of a claim. Fields are plain text (forests, partitions,
/// sign strings) so an instance can be stored and replayed later.
struct Instance {
  std::string claim;
  int n = 0;
  /// Signed forests, in the claim's order.
  std::vector<std::pair<int, std::string>> forests;
  /// Signed shards (sign strings over `support`); empty means every shard.
  std::vector<std::pair<int, std::string>> shards;
  std::string support;
  /// Second partition where the claim needs one (R for projections).
  std::string partition;
  /// Seed of random functionals used by the check.
  std::uint64_t seed = 0;
  /// Index of a basis functional; -1 means all of them.
  long index = -1;
  /// Failure description (filled in on counterexamples).
  std::string detail;
};

/// Runs the check behind `instance.claim`. Returns a narrowed counterexample when the
/// claim fails, nullopt when it holds. Throws Error for unknown claims.
std::optional<Instance> check(const Instance& instance);

/// True when replaying the counterexample still fails.
bool replay(const Instance& counterexample);

struct AuditEntry {
  std::string claim;
  std::string statement;
  int n = 0;
  std::size_t instances = 0;
  bool sampled = false;
  bool pass = true;
  std::optional<Instance> counterexample;
};

struct AuditReport {
  std::vector<AuditEntry> entries;

  bool pass() const;
  void merge(AuditReport other);
};

/// Antisymmetry, Jacobi and the pre-Lie arrow identities. Exhaustive for n <= 4,
/// `samples` fixed-seed instances per claim for n >= 5.
AuditReport verify_lie_axioms(int n, std::uint64_t seed = kDefaultSeed, std::size_t samples = 1000);
/// Two evaluation paths of the dual derivative and forest derivative duality.
AuditReport verify_calculus(int n, std::uint64_t seed = kDefaultSeed, std::size_t samples = 1000);
/// Unit, functoriality, and compatibility of dual derivatives with Stein[I].
AuditReport verify_module_axioms(int n, std::uint64_t seed = kDefaultSeed, std::size_t samples = 1000);
/// Steinmann adjacency spans ker Delta_R; Delta_R is surjective.
AuditReport verify_kernel(int n);
/// Derivative of a product factorizes; factorize inverts product.
AuditReport verify_factorization(int n, std::uint64_t seed = kDefaultSeed, std::size_t samples = 1000);
/// Quotient dimension, annihilator duality, first derivatives suffice, delayering.
AuditReport verify_steinmann(int n, std::uint64_t seed = kDefaultSeed, std::size_t samples = 1000);

AuditReport full_audit(int n, std::uint64_t seed = kDefaultSeed, std::size_t samples = 1000);

/// Suite by name: lie, calculus, module, kernel, factorization, steinmann, all.
AuditReport run_suite(const std::string& name, int n, std::uint64_t seed = kDefaultSeed, std::size_t samples = 1000);

}  // namespace adjbraid
