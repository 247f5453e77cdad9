#include "reflectlab/groups.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace reflectlab {

namespace {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

long pow_mod(long b, long e, long m) {
  long r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

// Smallest residue of multiplicative order exactly r mod l.
long pick_zeta(long l, long r) {
  for (long z = 2; z < l; ++z) {
    if (pow_mod(z, r, l) != 1) continue;
    bool proper = true;
    for (long d = 1; d < r; ++d)
      if (r % d == 0 && pow_mod(z, d, l) == 1) proper = false;
    if (proper) return z;
  }
  throw std::logic_error("pick_zeta: no element of order r (r | l-1 violated?)");
}

std::vector<std::vector<int>> permutations4(bool even_only) {
  std::vector<int> base{0, 1, 2, 3};
  std::vector<std::vector<int>> out;
  std::sort(base.begin(), base.end());
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (base[i] > base[j]) ++inversions;
    if (!even_only || inversions % 2 == 0) out.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return out;
}

std::vector<int> compose(const std::vector<int>& p, const std::vector<int>& q) {
  // (p*q)(x) = p(q(x))
  std::vector<int> r(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) r[x] = p[q[x]];
  return r;
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::S3: return "S3";
    case Family::S4: return "S4";
    case Family::A4: return "A4";
    case Family::D2l: return "D2l";
    case Family::SemiDirect: return "SemiDirect";
  }
  return "?";
}

FiniteGroup FiniteGroup::build(Family family, long l, long r) {
  FiniteGroup g;
  g.family_ = family;
  g.gen_names_ = {"sigma", "tau"};

  if (family == Family::S3 || family == Family::D2l) {
    if (family == Family::S3) {
      if (l != 0 || r != 0)
        throw std::invalid_argument("S3 takes no parameters");
      l = 3;
    } else {
      if (!is_prime(l) || l == 2)
        throw std::invalid_argument("D2l requires an odd prime l");
    }
    g.l_ = l;
    // element tau^a sigma^b at index 2a + b
    int n = static_cast<int>(2 * l);
    g.order_ = n;
    g.mul_.assign(n, std::vector<int>(n));
    for (long a = 0; a < l; ++a)
      for (long b = 0; b < 2; ++b)
        for (long c = 0; c < l; ++c)
          for (long d = 0; d < 2; ++d) {
            long a2 = ((b ? a - c : a + c) % l + l) % l;
            long b2 = (b + d) % 2;
            g.mul_[2 * a + b][2 * c + d] = static_cast<int>(2 * a2 + b2);
          }
    g.gen_elems_ = {1 /* sigma */, 2 /* tau */};
  } else if (family == Family::SemiDirect) {
    if (!is_prime(l) || !is_prime(r) || (l - 1) % r != 0)
      throw std::invalid_argument(
          "SemiDirect requires primes l, r with r | l-1");
    g.l_ = l;
    g.r_ = r;
    g.zeta_ = pick_zeta(l, r);
    // element tau^a sigma^b at index a*r + b, a in [0,l), b in [0,r)
    int n = static_cast<int>(l * r);
    g.order_ = n;
    g.mul_.assign(n, std::vector<int>(n));
    for (long a = 0; a < l; ++a)
      for (long b = 0; b < r; ++b)
        for (long c = 0; c < l; ++c)
          for (long d = 0; d < r; ++d) {
            // (tau^a sigma^b)(tau^c sigma^d) = tau^(a + c*zeta^b) sigma^(b+d)
            long a2 = (a + c * pow_mod(g.zeta_, b, l)) % l;
            long b2 = (b + d) % r;
            g.mul_[a * r + b][c * r + d] = static_cast<int>(a2 * r + b2);
          }
    g.gen_elems_ = {1 /* sigma */, static_cast<int>(r) /* tau */};
  } else {
    // S4 / A4 as permutation groups on 4 letters, lexicographic element order
    if (l != 0 || r != 0)
      throw std::invalid_argument("S3/S4/A4 take no parameters");
    g.perms_ = permutations4(family == Family::A4);
    int n = static_cast<int>(g.perms_.size());
    g.order_ = n;
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < n; ++i) index[g.perms_[i]] = i;
    g.mul_.assign(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        g.mul_[i][j] = index.at(compose(g.perms_[i], g.perms_[j]));
    if (family == Family::S4) {
      g.gen_elems_ = {index.at({1, 0, 2, 3}),      // sigma = (01)
                      index.at({1, 2, 3, 0})};     // tau = (0123)
    } else {
      g.gen_elems_ = {index.at({1, 0, 3, 2}),      // sigma = (01)(23)
                      index.at({1, 2, 0, 3})};     // tau = (012)
    }
  }

  g.finalize();
  return g;
}

void FiniteGroup::finalize() {
  int n = order_;
  // identity at index 0 by construction; verify
  for (int a = 0; a < n; ++a)
    if (mul_[0][a] != a || mul_[a][0] != a)
      throw std::logic_error("FiniteGroup: index 0 is not the identity");
  // associativity, exhaustive
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (mul_[mul_[a][b]][c] != mul_[a][mul_[b][c]])
          throw std::logic_error("FiniteGroup: multiplication not associative");
  // inverses
  inv_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (mul_[a][b] == 0 && mul_[b][a] == 0) {
        inv_[a] = b;
        break;
      }
    if (inv_[a] < 0) throw std::logic_error("FiniteGroup: missing inverse");
  }
  // presentation relations
  int s = gen_elems_[0], t = gen_elems_[1];
  auto pw = [&](int g, long e) {
    int acc = 0;
    for (long i = 0; i < e; ++i) acc = mul_[acc][g];
    return acc;
  };
  switch (family_) {
    case Family::S3:
    case Family::D2l: {
      long l = l_;
      if (pw(s, 2) != 0 || pw(t, l) != 0)
        throw std::logic_error("FiniteGroup: generator order relation fails");
      if (mul_[mul_[s][t]][s] != inv_[t])
        throw std::logic_error("FiniteGroup: sigma tau sigma != tau^-1");
      break;
    }
    case Family::SemiDirect: {
      if (pw(s, r_) != 0 || pw(t, l_) != 0)
        throw std::logic_error("FiniteGroup: generator order relation fails");
      if (mul_[mul_[s][t]][inv_[s]] != pw(t, zeta_))
        throw std::logic_error("FiniteGroup: sigma tau sigma^-1 != tau^zeta");
      break;
    }
    case Family::S4:
      if (pw(s, 2) != 0 || pw(t, 4) != 0)
        throw std::logic_error("FiniteGroup: generator order relation fails");
      break;
    case Family::A4:
      if (pw(s, 2) != 0 || pw(t, 3) != 0)
        throw std::logic_error("FiniteGroup: generator order relation fails");
      break;
  }
  // word table by BFS over the generators
  words_.assign(n, {});
  std::vector<bool> seen(n, false);
  std::deque<int> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    int g = queue.front();
    queue.pop_front();
    for (std::size_t k = 0; k < gen_elems_.size(); ++k) {
      int h = mul_[g][gen_elems_[k]];
      if (!seen[h]) {
        seen[h] = true;
        words_[h] = words_[g];
        words_[h].push_back(static_cast<int>(k));
        queue.push_back(h);
      }
    }
  }
  for (int a = 0; a < n; ++a)
    if (!seen[a])
      throw std::logic_error("FiniteGroup: generators do not generate");
}

int FiniteGroup::generator(const std::string& name) const {
  for (std::size_t i = 0; i < gen_names_.size(); ++i)
    if (gen_names_[i] == name) return gen_elems_[i];
  throw std::invalid_argument("FiniteGroup: unknown generator " + name);
}

int FiniteGroup::element_order(int g) const {
  int acc = g, n = 1;
  while (acc != 0) {
    acc = mul_[acc][g];
    ++n;
  }
  return n;
}

const std::vector<int>& FiniteGroup::perm(int g) const {
  static const std::vector<int> empty;
  if (perms_.empty()) return empty;
  return perms_[g];
}

std::string FiniteGroup::describe(int g) const {
  std::ostringstream os;
  os << family_name(family_) << "#" << g;
  if (!perms_.empty()) {
    os << "[";
    for (int x : perms_[g]) os << x;
    os << "]";
  }
  return os.str();
}

bool Subgroup::contains(int g) const {
  return std::binary_search(elems.begin(), elems.end(), g);
}

Subgroup subgroup_generated(const FiniteGroup& g,
                            const std::vector<int>& gens) {
  std::set<int> closure{0};
  std::deque<int> queue{0};
  for (int e : gens) {
    if (e < 0 || e >= g.order())
      throw std::invalid_argument("subgroup_generated: bad element index");
    if (closure.insert(e).second) queue.push_back(e);
  }
  while (!queue.empty()) {
    int a = queue.front();
    queue.pop_front();
    std::vector<int> snapshot(closure.begin(), closure.end());
    for (int b : snapshot) {
      for (int c : {g.mul(a, b), g.mul(b, a), g.inv(a)}) {
        if (closure.insert(c).second) queue.push_back(c);
      }
    }
  }
  Subgroup h;
  h.parent = &g;
  h.elems.assign(closure.begin(), closure.end());
  return h;
}

Subgroup trivial_subgroup(const FiniteGroup& g) {
  return Subgroup{&g, {0}};
}

Subgroup full_subgroup(const FiniteGroup& g) {
  Subgroup h;
  h.parent = &g;
  h.elems.resize(g.order());
  for (int i = 0; i < g.order(); ++i) h.elems[i] = i;
  return h;
}

std::vector<Subgroup> all_subgroups(const FiniteGroup& g) {
  if (g.order() > 200)
    throw std::invalid_argument("all_subgroups: order cap 200 exceeded");
  std::set<std::vector<int>> seen;
  std::vector<Subgroup> out;
  auto add = [&](const Subgroup& h) {
    if (seen.insert(h.elems).second) out.push_back(h);
  };
  add(trivial_subgroup(g));
  for (int a = 0; a < g.order(); ++a) {
    add(subgroup_generated(g, {a}));
    for (int b = a + 1; b < g.order(); ++b)
      add(subgroup_generated(g, {a, b}));
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& x, const Subgroup& y) {
    if (x.elems.size() != y.elems.size())
      return x.elems.size() < y.elems.size();
    return x.elems < y.elems;
  });
  return out;
}

Subgroup klein_four(const FiniteGroup& g) {
  if (g.family() != Family::S4 && g.family() != Family::A4)
    throw std::invalid_argument("klein_four: S4/A4 only");
  std::vector<int> elems{0};
  for (int e = 0; e < g.order(); ++e) {
    const auto& p = g.perm(e);
    // double transposition: order 2, no fixed point
    bool fixed_free = true;
    for (int x = 0; x < 4; ++x) fixed_free &= (p[x] != x);
    if (fixed_free && g.element_order(e) == 2) elems.push_back(e);
  }
  std::sort(elems.begin(), elems.end());
  if (elems.size() != 4) throw std::logic_error("klein_four: wrong size");
  return Subgroup{&g, elems};
}

CosetAction coset_action(const FiniteGroup& g, const Subgroup& h) {
  if (h.parent != &g)
    throw std::invalid_argument("coset_action: subgroup of a different group");
  int n = g.order();
  std::vector<int> coset_of(n, -1);
  CosetAction act;
  for (int e = 0; e < n; ++e) {
    if (coset_of[e] >= 0) continue;
    int id = static_cast<int>(act.cosets.size());
    std::vector<int> coset;
    for (int x : h.elems) {
      int m = g.mul(e, x);
      coset_of[m] = id;
      coset.push_back(m);
    }
    std::sort(coset.begin(), coset.end());
    act.cosets.push_back(std::move(coset));
  }
  act.perm_of.assign(n, std::vector<int>(act.cosets.size()));
  for (int e = 0; e < n; ++e) {
    for (std::size_t j = 0; j < act.cosets.size(); ++j) {
      // g * (rep_j H): rep = first element of the coset
      act.perm_of[e][j] = coset_of[g.mul(e, act.cosets[j][0])];
    }
  }
  return act;
}

}  // namespace reflectlab
