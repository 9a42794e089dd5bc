#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <functional>
#include <unordered_map>

#include "pmx/error.hpp"
#include "pmx/refute.hpp"

namespace pmx {

bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

namespace {

using Entry = std::pair<std::uint32_t, std::uint32_t>;  // (column key, value)
using Row = std::vector<Entry>;                        // leading entry first, normalized to 1

std::uint32_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint32_t p) {
    std::uint64_t r = 1;
    a %= p;
    while (e) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

std::uint32_t inverse(std::uint32_t a, std::uint32_t p) { return pow_mod(a, p - 2, p); }

std::uint32_t reduce_rational(const Rational& q, std::uint32_t p) {
    mpz_class num = q.get_num() % p, den = q.get_den() % p;
    if (num < 0) num += p;
    if (den == 0) throw ParameterError("coefficient " + q.get_str() + " has a denominator divisible by " + std::to_string(p));
    auto n = static_cast<std::uint32_t>(num.get_ui()), dd = static_cast<std::uint32_t>(den.get_ui());
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(n) * inverse(dd, p) % p);
}

// Sparse elimination against a pivot table, with a dense accumulator over
// the key space and a min-heap of touched keys.
class Reducer {
public:
    Reducer(std::size_t keys, std::uint32_t p) : acc_(keys, 0), in_heap_(keys, 0), p_(p) {}

    template <class Lookup>
    std::optional<Row> reduce(const std::vector<Entry>& input, Lookup&& pivot) {
        for (const auto& [c, v] : input) add(c, v);
        while (!heap_.empty()) {
            std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
            std::uint32_t c = heap_.back();
            heap_.pop_back();
            in_heap_[c] = 0;
            std::uint32_t v = acc_[c];
            if (v == 0) continue;
            if (const Row* r = pivot(c)) {
                acc_[c] = 0;
                const std::uint64_t f = p_ - v;
                for (std::size_t i = 1; i < r->size(); ++i) add((*r)[i].first, static_cast<std::uint32_t>(f * (*r)[i].second % p_));
                continue;
            }
            Row out;
            out.emplace_back(c, 1);
            acc_[c] = 0;
            const std::uint64_t inv = inverse(v, p_);
            std::sort(heap_.begin(), heap_.end());
            for (std::uint32_t k : heap_) {
                in_heap_[k] = 0;
                if (acc_[k] != 0) out.emplace_back(k, static_cast<std::uint32_t>(acc_[k] * inv % p_));
                acc_[k] = 0;
            }
            heap_.clear();
            return out;
        }
        return std::nullopt;
    }

private:
    void add(std::uint32_t c, std::uint32_t v) {
        std::uint32_t s = acc_[c] + v;
        acc_[c] = s >= p_ ? s - p_ : s;
        if (!in_heap_[c]) {
            in_heap_[c] = 1;
            heap_.push_back(c);
            std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
        }
    }

    std::vector<std::uint32_t> acc_;
    std::vector<char> in_heap_;
    std::vector<std::uint32_t> heap_;
    std::uint32_t p_;
};

std::size_t basis_size(int n, int d, std::size_t limit) {
    std::size_t total = 0, binom = 1;
    for (int i = 0; i <= d; ++i) {
        if (i > 0) {
            // C(n, i) = C(n, i-1) * (n - i + 1) / i, exact at every step
            unsigned __int128 next = static_cast<unsigned __int128>(binom) * static_cast<unsigned>(n - i + 1) / static_cast<unsigned>(i);
            if (next > limit) return limit + 1;
            binom = static_cast<std::size_t>(next);
        }
        total += binom;
        if (total > limit) return limit + 1;
    }
    return total;
}

// Span kept in reduced row echelon form: every row has a leading 1 and no
// entries in any other pivot column. Near the fixpoint almost every column is
// a pivot, so rows stay short.
class PcSpan {
public:
    PcSpan(int n, int d, std::uint32_t p, std::size_t limit) : n_(n), d_(d), p_(p) {
        const int top = std::min(d, n);
        const std::size_t size = basis_size(n, top, limit);
        if (size > limit) {
            throw GuardError("PC basis for " + std::to_string(n) + " variables at degree " + std::to_string(d) +
                             " exceeds the limit of " + std::to_string(limit) + " monomials");
        }
        monos_.reserve(size);
        for (int k = top; k >= 0; --k) {
            if (k == 0) {
                monos_.push_back(0);
                break;
            }
            // Gosper's hack: all k-subsets of n bits in increasing order.
            std::uint64_t m = (std::uint64_t{1} << k) - 1;
            const std::uint64_t end = std::uint64_t{1} << n;
            while (m < end) {
                monos_.push_back(m);
                std::uint64_t c = m & (~m + 1), r = m + c;
                m = (((r ^ m) >> 2) / c) | r;
            }
        }
        index_.reserve(monos_.size() * 2);
        for (std::size_t i = 0; i < monos_.size(); ++i) index_.emplace(monos_[i], static_cast<std::uint32_t>(i));
        num_top_ = d <= n ? static_cast<std::size_t>(std::count_if(monos_.begin(), monos_.end(), [d](std::uint64_t m) {
            return __builtin_popcountll(m) == d;
        }))
                          : 0;
        pivot_.assign(monos_.size(), -1);
        occ_.resize(monos_.size());
        acc_.assign(monos_.size(), 0);
        touched_flag_.assign(monos_.size(), 0);
    }

    std::uint32_t column(std::uint64_t mask) const { return index_.at(mask); }
    bool refuted() const { return pivot_.back() >= 0; }
    std::size_t dimension() const { return rows_.size(); }

    void add(const std::vector<Entry>& poly) {
        auto row = reduce(poly);
        if (!row) return;
        insert(std::move(*row));
    }

    void close() {
        std::vector<long> seen(static_cast<std::size_t>(n_), -1);
        while (!refuted()) {
            drain_low();
            if (refuted()) return;
            bool any = false;
            for (int x = 0; x < n_ && !refuted(); ++x) {
                if (seen[static_cast<std::size_t>(x)] == top_version_) continue;
                seen[static_cast<std::size_t>(x)] = top_version_;
                any = true;
                multiply_top(x);
            }
            if (!any && low_queue_.empty()) return;
        }
    }

private:
    void touch(std::uint32_t c, std::uint32_t v) {
        std::uint32_t s = acc_[c] + v;
        acc_[c] = s >= p_ ? s - p_ : s;
        if (!touched_flag_[c]) {
            touched_flag_[c] = 1;
            touched_.push_back(c);
        }
    }

    // Pivot rows only carry non-pivot columns besides their leading 1, so a
    // single sweep over the touched pivot columns fully reduces the input.
    std::optional<Row> reduce(const std::vector<Entry>& input) {
        for (const auto& [c, v] : input) touch(c, v);
        for (std::size_t i = 0; i < touched_.size(); ++i) {
            const std::uint32_t c = touched_[i];
            const std::uint32_t v = acc_[c];
            if (v == 0 || pivot_[c] < 0) continue;
            acc_[c] = 0;
            const Row& r = rows_[static_cast<std::size_t>(pivot_[c])];
            const std::uint64_t f = p_ - v;
            for (std::size_t k = 1; k < r.size(); ++k) touch(r[k].first, static_cast<std::uint32_t>(f * r[k].second % p_));
        }
        Row out;
        for (std::uint32_t c : touched_) {
            if (acc_[c] != 0) out.emplace_back(c, acc_[c]);
            acc_[c] = 0;
            touched_flag_[c] = 0;
        }
        touched_.clear();
        if (out.empty()) return std::nullopt;
        std::sort(out.begin(), out.end());
        const std::uint64_t inv = inverse(out.front().second, p_);
        for (auto& e : out) e.second = static_cast<std::uint32_t>(e.second * inv % p_);
        return out;
    }

    void insert(Row row) {
        const std::uint32_t lead = row.front().first;
        const auto id = static_cast<std::uint32_t>(rows_.size());
        // Clear the new pivot column from every row that mentions it.
        std::vector<std::uint32_t> holders;
        holders.swap(occ_[lead]);
        for (std::uint32_t h : holders) {
            Row& target = rows_[h];
            auto it = std::lower_bound(target.begin() + 1, target.end(), Entry{lead, 0});
            if (it == target.end() || it->first != lead) continue;
            const std::uint64_t f = p_ - it->second;
            Row merged;
            merged.reserve(target.size() + row.size());
            auto a = target.begin(), b = row.begin();
            while (a != target.end() || b != row.end()) {
                if (b == row.end() || (a != target.end() && a->first < b->first)) {
                    merged.push_back(*a++);
                } else if (a == target.end() || b->first < a->first) {
                    occ_[b->first].push_back(h);
                    merged.emplace_back(b->first, static_cast<std::uint32_t>(f * b->second % p_));
                    ++b;
                } else {
                    auto v = static_cast<std::uint32_t>((a->second + f * b->second) % p_);
                    if (v != 0) merged.emplace_back(a->first, v);
                    ++a;
                    ++b;
                }
            }
            target.swap(merged);
        }
        for (std::size_t k = 1; k < row.size(); ++k) occ_[row[k].first].push_back(id);
        pivot_[lead] = static_cast<int>(id);
        if (__builtin_popcountll(monos_[lead]) < d_) {
            low_queue_.push_back(id);
        } else {
            top_rows_.push_back(id);
            ++top_version_;
        }
        rows_.push_back(std::move(row));
    }

    std::vector<Entry> times(const Row& row, int x) const {
        const std::uint64_t bit = std::uint64_t{1} << x;
        std::vector<Entry> out;
        out.reserve(row.size());
        for (const auto& [c, v] : row) out.emplace_back(index_.at(monos_[c] | bit), v);
        return out;
    }

    // Low rows have degree < d, so x f stays within the basis for every x.
    void drain_low() {
        while (!low_queue_.empty() && !refuted()) {
            std::uint32_t r = low_queue_.front();
            low_queue_.pop_front();
            for (int x = 0; x < n_ && !refuted(); ++x) add(times(rows_[r], x));
        }
    }

    // Elements f of the span with deg(x f) <= d are exactly those whose
    // degree-d part only uses monomials containing x. A row whose pivot lacks
    // x can never take part (no other row touches its pivot column), so only
    // the remaining top rows are eliminated on their x-free degree-d columns.
    void multiply_top(int x) {
        const std::uint64_t bit = std::uint64_t{1} << x;
        const std::size_t cols = monos_.size();
        auto bad = [&](std::uint32_t c) { return c < num_top_ && !(monos_[c] & bit); };
        std::vector<Row> kernel;
        std::vector<std::uint32_t> mixed;
        for (std::uint32_t r : top_rows_) {
            const Row& row = rows_[r];
            if (!(monos_[row.front().first] & bit)) continue;
            if (std::none_of(row.begin() + 1, row.end(), [&](const Entry& e) { return bad(e.first); })) {
                kernel.push_back(row);
            } else {
                mixed.push_back(r);
            }
        }
        if (!mixed.empty()) {
            if (!local_) local_.emplace(2 * cols, p_);
            std::unordered_map<std::uint32_t, std::size_t> local_pivot;
            std::vector<Row> local_rows;
            for (std::uint32_t r : mixed) {
                std::vector<Entry> keyed;
                keyed.reserve(rows_[r].size());
                for (const auto& [c, v] : rows_[r]) keyed.emplace_back(bad(c) ? c : static_cast<std::uint32_t>(cols + c), v);
                auto red = local_->reduce(keyed, [&](std::uint32_t k) -> const Row* {
                    auto it = local_pivot.find(k);
                    return it == local_pivot.end() ? nullptr : &local_rows[it->second];
                });
                if (!red) continue;
                if (red->front().first < cols) {
                    local_pivot.emplace(red->front().first, local_rows.size());
                    local_rows.push_back(std::move(*red));
                } else {
                    for (auto& e : *red) e.first -= static_cast<std::uint32_t>(cols);
                    kernel.push_back(std::move(*red));
                }
            }
        }
        for (const auto& g : kernel) {
            add(times(g, x));
            if (refuted()) return;
        }
    }

    int n_, d_;
    std::uint32_t p_;
    std::vector<std::uint64_t> monos_;
    std::unordered_map<std::uint64_t, std::uint32_t> index_;
    std::size_t num_top_ = 0;
    std::vector<int> pivot_;
    std::vector<Row> rows_;
    std::vector<std::vector<std::uint32_t>> occ_;  // rows that may hold a non-pivot column
    std::vector<std::uint32_t> acc_;
    std::vector<char> touched_flag_;
    std::vector<std::uint32_t> touched_;
    std::deque<std::uint32_t> low_queue_;
    std::vector<std::uint32_t> top_rows_;
    long top_version_ = 0;
    std::optional<Reducer> local_;
};

Polynomial eliminate(const Polynomial& p) {
    return p.substitute([](const Variable& v) {
        if (v.kind == VarKind::Twin) return Polynomial::constant(1) - Polynomial::variable(v.partner());
        return Polynomial::variable(v);
    });
}

}  // namespace

PcResult pc_degree_decide(const ConstraintSystem& cs, int d, const PcOptions& opts) {
    if (d < 0) throw ParameterError("pc_degree_decide: negative degree bound");
    if (!is_prime(opts.prime)) throw ParameterError("pc_degree_decide: modulus " + std::to_string(opts.prime) + " is not prime");
    if (opts.prime == 2 && !opts.allow_char2) {
        throw ParameterError("pc_degree_decide: characteristic 2 requires allow_char2");
    }
    if (opts.prime >= (1U << 31)) throw ParameterError("pc_degree_decide: modulus must be below 2^31");

    std::vector<Polynomial> axioms;
    std::set<Variable> var_set;
    for (const auto& eq : cs.equations) {
        Polynomial q = (opts.eliminate_twins ? eliminate(eq.poly) : eq.poly).multilinear();
        if (q.is_zero()) continue;
        auto vs = q.variables();
        var_set.insert(vs.begin(), vs.end());
        axioms.push_back(std::move(q));
    }
    const std::vector<Variable> vars(var_set.begin(), var_set.end());
    if (vars.size() > 63) throw GuardError("pc_degree_decide: more than 63 variables");
    std::map<Variable, int> var_index;
    for (std::size_t i = 0; i < vars.size(); ++i) var_index.emplace(vars[i], static_cast<int>(i));

    PcSpan span(static_cast<int>(vars.size()), d, opts.prime, opts.basis_limit);
    for (const auto& q : axioms) {
        if (q.degree() > d) continue;
        std::vector<Entry> row;
        for (const auto& [m, c] : q.terms()) {
            std::uint64_t mask = 0;
            for (const auto& f : m.factors()) mask |= std::uint64_t{1} << var_index.at(f.first);
            std::uint32_t v = reduce_rational(c, opts.prime);
            if (v != 0) row.emplace_back(span.column(mask), v);
        }
        span.add(row);
    }
    span.close();
    return {d, span.refuted(), span.dimension(), opts.prime};
}

PcSearchResult pc_degree_search(const ConstraintSystem& cs, int d_max, const PcOptions& opts) {
    PcSearchResult out;
    out.d_max = d_max;
    for (int d = 0; d <= d_max; ++d) {
        out.runs.push_back(pc_degree_decide(cs, d, opts));
        if (out.runs.back().refuted) {
            out.degree = d;
            break;
        }
    }
    return out;
}

}  // namespace pmx
