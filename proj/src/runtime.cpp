#include "roughalg/runtime.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <thread>

namespace roughalg::runtime {

int thread_cap() {
  const char* env = std::getenv("ROUGHALG_THREADS");
  if (env == nullptr || *env == '\0') {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }
  int value = 0;
  const char* end = env + std::strlen(env);
  const auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc() || ptr != end || value < 1) return 1;
  return value;
}

}  // namespace roughalg::runtime
