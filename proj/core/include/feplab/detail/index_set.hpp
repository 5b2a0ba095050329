#ifndef FEPLAB_DETAIL_INDEX_SET_HPP
#define FEPLAB_DETAIL_INDEX_SET_HPP

#include <cstddef>
#include <vector>

namespace feplab::detail {

// Dynamic set of small integer ids with O(1) insert/erase/uniform sample.
class IndexSet {
 public:
  explicit IndexSet(int capacity)
      : slot_(static_cast<std::size_t>(capacity), -1) {}

  bool contains(int id) const {
    return slot_[static_cast<std::size_t>(id)] >= 0;
  }

  void set(int id, bool on) {
    const bool in = contains(id);
    if (on && !in) {
      slot_[static_cast<std::size_t>(id)] = static_cast<int>(items_.size());
      items_.push_back(id);
    } else if (!on && in) {
      const int s = slot_[static_cast<std::size_t>(id)];
      const int last = items_.back();
      items_[static_cast<std::size_t>(s)] = last;
      slot_[static_cast<std::size_t>(last)] = s;
      items_.pop_back();
      slot_[static_cast<std::size_t>(id)] = -1;
    }
  }

  int size() const { return static_cast<int>(items_.size()); }
  int at(int i) const { return items_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<int> items_;
  std::vector<int> slot_;
};

}  // namespace feplab::detail

#endif
