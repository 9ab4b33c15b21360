#pragma once

#include <map>

namespace nzs {

// Union-find over arbitrary ordered keys; the smaller key becomes the root.
template <class Key>
class UnionFind {
public:
    const Key& find(const Key& x)
    {
        auto it = parent_.try_emplace(x, x).first;
        if (it->second == x) return it->first;
        const Key& root = find(it->second);
        it->second = root;
        return root;
    }

    void unite(const Key& a, const Key& b)
    {
        Key ra = find(a), rb = find(b);
        if (ra == rb) return;
        if (ra < rb)
            parent_[rb] = ra;
        else
            parent_[ra] = rb;
    }

    const std::map<Key, Key>& entries() const { return parent_; }

private:
    std::map<Key, Key> parent_;
};

}  // namespace nzs
