#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "arith.hpp"
#include "sieve.hpp"

namespace phisig {

enum class ArithFn : std::uint8_t { phi, sigma };

inline char symbol(ArithFn fn) { return fn == ArithFn::phi ? 'p' : 's'; }
inline std::string_view name(ArithFn fn) { return fn == ArithFn::phi ? "phi" : "sigma"; }

inline u64 apply(ArithFn fn, const Factorization& f) {
    return fn == ArithFn::phi ? phi(f) : sigma(f);
}

/// Accepts "phi", "sigma", "p", "s".
inline ArithFn parse_fn(std::string_view text) {
    if (text == "phi" || text == "p")
        return ArithFn::phi;
    if (text == "sigma" || text == "s")
        return ArithFn::sigma;
    fail(ErrorKind::usage, "unknown arithmetic function '" + std::string(text) + "'");
}

/// A nonempty composition a(1) o a(2) o ... o a(k), stored outermost first.
/// Applying the word to m evaluates a(k) first.
class ArithWord {
  public:
    explicit ArithWord(std::vector<ArithFn> symbols) : symbols_(std::move(symbols)) {
        if (symbols_.empty())
            fail(ErrorKind::domain, "arithmetic word must have length >= 1");
    }

    static ArithWord iterate(ArithFn fn, std::size_t k) {
        return ArithWord(std::vector<ArithFn>(k, fn));
    }

    /// Grammar: a string over {p, s} read outermost-first ("ps" = phi o sigma),
    /// or "phi", "sigma", "phi^k", "sigma^k".
    static ArithWord parse(std::string_view text) {
        const auto caret = text.find('^');
        const auto head = text.substr(0, caret);
        if (head == "phi" || head == "sigma") {
            std::size_t k = 1;
            if (caret != std::string_view::npos) {
                const auto tail = text.substr(caret + 1);
                auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), k);
                if (ec != std::errc{} || ptr != tail.data() + tail.size() || k == 0)
                    fail(ErrorKind::usage, "bad iterate count in word '" + std::string(text) + "'");
            }
            return iterate(parse_fn(head), k);
        }
        if (text.empty() || caret != std::string_view::npos)
            fail(ErrorKind::usage, "bad arithmetic word '" + std::string(text) + "'");
        std::vector<ArithFn> syms;
        for (char c : text) {
            if (c == 'p')
                syms.push_back(ArithFn::phi);
            else if (c == 's')
                syms.push_back(ArithFn::sigma);
            else
                fail(ErrorKind::usage, "bad arithmetic word '" + std::string(text) + "'");
        }
        return ArithWord(std::move(syms));
    }

    std::size_t size() const noexcept { return symbols_.size(); }
    ArithFn operator[](std::size_t i) const { return symbols_.at(i); }
    const std::vector<ArithFn>& symbols() const noexcept { return symbols_; }

    /// this o fn: fn becomes the innermost (first-applied) symbol.
    ArithWord with_inner(ArithFn fn) const {
        auto s = symbols_;
        s.push_back(fn);
        return ArithWord(std::move(s));
    }

    std::string to_string() const {
        std::string s;
        for (auto fn : symbols_)
            s += symbol(fn);
        return s;
    }

    friend bool operator==(const ArithWord&, const ArithWord&) = default;

  private:
    std::vector<ArithFn> symbols_;
};

/// Evaluates the word at m through the sieve. Every intermediate value must
/// lie within the sieve; the error names the step that left it.
inline u64 iterate(const FactorSieve& sieve, const ArithWord& w, u64 m) {
    if (m == 0)
        fail(ErrorKind::domain, "iterate: m must be >= 1");
    u64 v = m;
    for (std::size_t step = 0; step < w.size(); ++step) {
        const ArithFn fn = w[w.size() - 1 - step];
        if (v > sieve.limit())
            fail(ErrorKind::out_of_range,
                 "iterate: step " + std::to_string(step + 1) + " (" + std::string(name(fn)) +
                     ") input " + std::to_string(v) + " exceeds sieve limit " +
                     std::to_string(sieve.limit()));
        v = apply(fn, sieve.factorize(v));
    }
    return v;
}

} // namespace phisig
