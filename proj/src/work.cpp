#include "rlp/work.hpp"

namespace rlp::work {

namespace {
thread_local WorkMeter* tls_meter = nullptr;
}

void charge(Work w, std::uint64_t n) {
  if (tls_meter != nullptr) tls_meter->charge(w, n);
}

double now() { return tls_meter != nullptr ? tls_meter->elapsed() : 0.0; }

WorkMeter* active() { return tls_meter; }

Scope::Scope(WorkMeter& meter) : previous_(tls_meter) { tls_meter = &meter; }

Scope::~Scope() { tls_meter = previous_; }

}  // namespace rlp::work
