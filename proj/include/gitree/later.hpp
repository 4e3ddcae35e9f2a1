#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>

namespace gitree {

// A value available one step later: a memoized thunk. Forcing only runs the
// producer; it never touches effect state.
template <class T>
class Later {
 public:
  Later() = default;

  static Later now(T value) {
    Later l;
    l.cell_ = std::make_shared<Cell>();
    l.cell_->value.emplace(std::move(value));
    l.cell_->ready.store(true, std::memory_order_release);
    return l;
  }

  static Later delay(std::function<T()> producer) {
    Later l;
    l.cell_ = std::make_shared<Cell>();
    l.cell_->producer = std::move(producer);
    return l;
  }

  const T& force() const {
    if (!cell_) throw std::logic_error("force of an empty Later");
    Cell& c = *cell_;
    if (!c.ready.load(std::memory_order_acquire)) {
      std::call_once(c.once, [&c] {
        c.value.emplace(c.producer());
        // Drop captured references so forced chains do not keep history alive.
        c.producer = nullptr;
        c.ready.store(true, std::memory_order_release);
      });
    }
    return *c.value;
  }

  bool forced() const { return cell_ && cell_->ready.load(std::memory_order_acquire); }
  bool valid() const { return static_cast<bool>(cell_); }

  // The applicative map of the later modality.
  template <class F>
  auto map(F f) const -> Later<std::decay_t<std::invoke_result_t<F, const T&>>> {
    using U = std::decay_t<std::invoke_result_t<F, const T&>>;
    Later self = *this;
    return Later<U>::delay([self, f = std::move(f)]() -> U { return f(self.force()); });
  }

  // Identity of the underlying cell; used by frame and pool identity checks.
  const void* identity() const { return cell_.get(); }

 private:
  struct Cell {
    std::once_flag once;
    std::atomic<bool> ready{false};
    std::function<T()> producer;
    std::optional<T> value;
  };
  std::shared_ptr<Cell> cell_;
};

}  // namespace gitree
