#include "bstretch/fitpack.hpp"

namespace bst {

namespace {

// level + size <= capacity without allocating a temporary per probe
bool fits(const Q& level, const Q& size, const Q& capacity) {
  thread_local Q sum;
  mpq_add(sum.get_mpq_t(), level.get_mpq_t(), size.get_mpq_t());
  return mpq_cmp(sum.get_mpq_t(), capacity.get_mpq_t()) <= 0;
}

}  // namespace

std::optional<int> first_fit(std::vector<Slot>& slots, const Item& item) {
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (fits(slots[i].level, item.size, slots[i].capacity)) {
      slots[i].level += item.size;
      slots[i].packed.push_back(item.id);
      return static_cast<int>(i);
    }
  }
  return std::nullopt;
}

std::optional<int> best_fit(std::vector<Slot>& slots, const Item& item) {
  std::optional<int> best;
  Q best_res;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    Q res = slots[i].capacity - slots[i].level - item.size;
    if (res < 0) continue;
    bool better = !best || res < best_res ||
                  (res == best_res && slots[i].slot_id < slots[*best].slot_id);
    if (better) {
      best = static_cast<int>(i);
      best_res = res;
    }
  }
  if (best) {
    slots[*best].level += item.size;
    slots[*best].packed.push_back(item.id);
  }
  return best;
}

int FirstFitRun::add_slot(const Q& capacity, const Q& prefill) {
  Slot s;
  s.slot_id = static_cast<int>(trace_.slots.size());
  s.capacity = capacity;
  s.level = 0;
  index_.set(s.slot_id, s.capacity);
  trace_.slots.push_back(std::move(s));
  prefill_.push_back(prefill);
  return trace_.slots.back().slot_id;
}

std::optional<int> FirstFitRun::pack(const Item& item) {
  Placement p;
  p.item = item.id;
  p.size = item.size;
  p.visible = static_cast<int>(trace_.slots.size());
  auto idx = index_.first_at_least(item.size);
  if (idx) {
    auto& slot = trace_.slots[*idx];
    slot.level += item.size;
    slot.packed.push_back(item.id);
    index_.set(*idx, slot.residual());
    p.slot = *idx;
    p.level_after = trace_.slots[*idx].level;
    p.level_before = p.level_after - item.size;
  } else if (!trace_.overflow_item) {
    trace_.overflow_item = item.id;
  }
  trace_.placements.push_back(std::move(p));
  return idx;
}

bool replay_first_fit(const FitTrace& trace) {
  std::vector<Q> level(trace.slots.size());
  for (const auto& p : trace.placements) {
    int chosen = -1;
    for (int i = 0; i < p.visible; ++i) {
      if (fits(level[i], p.size, trace.slots[i].capacity)) {
        chosen = i;
        break;
      }
    }
    if (chosen != p.slot) return false;
    if (chosen >= 0) {
      if (level[chosen] != p.level_before) return false;
      level[chosen] += p.size;
    }
  }
  for (std::size_t i = 0; i < level.size(); ++i)
    if (level[i] != trace.slots[i].level) return false;
  return true;
}

namespace {

Q total_packed(const FitTrace& trace) {
  Q total = 0;
  for (const auto& s : trace.slots) total += s.level;
  return total;
}

}  // namespace

BoundCheck check_varbin_bound(const FitTrace& trace, int k) {
  BoundCheck r;
  int v = static_cast<int>(trace.slots.size());
  r.total = total_packed(trace);
  if (k < 1 || 2 * k >= v) {
    r.status = BoundStatus::PreconditionFailed;
    r.detail = "need 1 <= k < v/2";
    return r;
  }
  for (const auto& s : trace.slots) {
    if (static_cast<int>(s.packed.size()) < k) {
      r.status = BoundStatus::PreconditionFailed;
      r.detail = "slot " + std::to_string(s.slot_id) + " holds fewer than k items";
      return r;
    }
  }
  Q sum = 0;
  for (int j = k; j <= v - k; ++j) sum += trace.slots[j - 1].capacity;
  r.bound = Q(k, k + 1) * sum;
  r.bound.canonicalize();
  if (r.total < r.bound) {
    r.status = BoundStatus::BoundViolated;
    r.detail = "total below k/(k+1) sum s(j)";
  }
  return r;
}

BoundCheck check_ff11_bound(const FitTrace& trace, const std::vector<Q>& prefill, const Q& p,
                            const Q& bin_size) {
  BoundCheck r;
  int v = static_cast<int>(trace.slots.size());
  if (v < 2 || prefill.size() != trace.slots.size()) {
    r.status = BoundStatus::PreconditionFailed;
    r.detail = "need v > 1 and one prefill per slot";
    return r;
  }
  r.total = 0;
  for (int j = 0; j < v; ++j) {
    const auto& s = trace.slots[j];
    if (s.packed.empty() || prefill[j] < p || s.capacity + prefill[j] != bin_size) {
      r.status = BoundStatus::PreconditionFailed;
      r.detail = "slot " + std::to_string(j) + " violates prefill/occupancy precondition";
      return r;
    }
    r.total += s.level + prefill[j];
  }
  r.bound = (bin_size + p) * (v - 1) / 2;
  if (r.total < r.bound) {
    r.status = BoundStatus::BoundViolated;
    r.detail = "total below (bin + p)(v-1)/2";
  }
  return r;
}

BoundCheck check_two_plus_bin(const FitTrace& trace, int k) {
  BoundCheck r;
  int v = static_cast<int>(trace.slots.size());
  r.total = total_packed(trace);
  if (v < 3 || k < 1) {
    r.status = BoundStatus::PreconditionFailed;
    r.detail = "need |V| >= 3";
    return r;
  }
  const Q& cap = trace.slots[0].capacity;
  for (int j = 0; j < v; ++j) {
    if (trace.slots[j].capacity != cap) {
      r.status = BoundStatus::PreconditionFailed;
      r.detail = "capacities differ";
      return r;
    }
    if (j >= 2 && static_cast<int>(trace.slots[j].packed.size()) < k) {
      r.status = BoundStatus::PreconditionFailed;
      r.detail = "slot " + std::to_string(j) + " holds fewer than k items";
      return r;
    }
  }
  r.bound = cap * k * v / (k + 1);
  if (r.total <= r.bound) {
    r.status = BoundStatus::BoundViolated;
    r.detail = "total not above k|V|/(k+1)";
  }
  return r;
}

void FirstFitIndex::reserve(int n) {
  if (n <= size_) return;
  int sz = 1;
  while (sz < n) sz <<= 1;
  std::vector<Q> leaves(sz, Q(-1));
  for (int i = 0; i < size_; ++i) leaves[i] = tree_[size_ + i];
  tree_.assign(2 * sz, Q(-1));
  for (int i = 0; i < sz; ++i) tree_[sz + i] = leaves[i];
  size_ = sz;
  for (int i = sz - 1; i >= 1; --i) tree_[i] = qmax(tree_[2 * i], tree_[2 * i + 1]);
}

void FirstFitIndex::set(int pos, const Q& key) {
  if (pos >= size_) reserve(pos + 1);
  int i = size_ + pos;
  tree_[i] = key;
  for (i >>= 1; i >= 1; i >>= 1) {
    const Q& m = qmax(tree_[2 * i], tree_[2 * i + 1]);
    if (tree_[i] == m) break;
    tree_[i] = m;
  }
}

std::optional<int> FirstFitIndex::first_at_least(const Q& x) const {
  if (size_ == 0 || tree_[1] < x) return std::nullopt;
  int i = 1;
  while (i < size_) i = tree_[2 * i] >= x ? 2 * i : 2 * i + 1;
  return i - size_;
}

void BestFitIndex::set(int id, const Q& residual) {
  if (id >= static_cast<int>(key_.size())) key_.resize(id + 1, {Q(0), false});
  if (key_[id].second) set_.erase({key_[id].first, id});
  key_[id] = {residual, true};
  set_.insert({residual, id});
}

void BestFitIndex::erase(int id) {
  if (!contains(id)) return;
  set_.erase({key_[id].first, id});
  key_[id].second = false;
}

std::optional<int> BestFitIndex::best(const Q& x) const {
  auto it = set_.lower_bound({x, -1});
  if (it == set_.end()) return std::nullopt;
  return it->second;
}

}  // namespace bst
