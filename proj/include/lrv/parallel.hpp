#pragma once

#include <exception>
#include <mutex>

namespace lrv {

/// Exceptions must not escape an OpenMP region; run loop bodies through this and
/// rethrow the first captured one after the loop.
class ExceptionCollector {
 public:
  template <typename F>
  void run(F&& body) noexcept {
    try {
      body();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!first_) first_ = std::current_exception();
    }
  }

  void rethrow() const {
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr first_;
};

}  // namespace lrv
