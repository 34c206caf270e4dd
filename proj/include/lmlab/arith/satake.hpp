#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "characters.hpp"

namespace lmlab {

// Local data of a degree-m L-function: prime -> Satake parameters.
// Character-backed specs are defined at every prime; table-backed specs only
// at the tabulated primes.
class SatakeSpec {
public:
    SatakeSpec() = default;

    static SatakeSpec from_character(const DirichletCharacter& chi, std::string label = {}) {
        SatakeSpec s;
        s.degree_ = 1;
        s.grc_ = true;
        s.label_ = label.empty() ? (chi.modulus() == 1 ? std::string("zeta") : "dirichlet:" + chi.id())
                                 : std::move(label);
        s.character_ = chi;
        return s;
    }

    static SatakeSpec from_table(int degree, std::string label,
                                 std::map<std::uint64_t, std::vector<cplx>> table, bool grc) {
        if (degree < 1) throw DomainError("SatakeSpec: degree must be >= 1");
        SatakeSpec s;
        s.degree_ = degree;
        s.label_ = std::move(label);
        s.grc_ = grc;
        for (const auto& [p, a] : table)
            if (static_cast<int>(a.size()) != degree)
                throw DataError("SatakeSpec: prime " + std::to_string(p) + " has " + std::to_string(a.size()) +
                                " parameters, expected " + std::to_string(degree));
        s.table_ = std::move(table);
        s.validate();
        return s;
    }

    int degree() const { return degree_; }
    const std::string& label() const { return label_; }
    bool grc_asserted() const { return grc_; }
    const std::optional<DirichletCharacter>& character() const { return character_; }

    bool has_prime(std::uint64_t p) const { return character_ || table_.count(p) != 0; }

    std::vector<cplx> alphas(std::uint64_t p) const {
        if (character_) return {(*character_)(p)};
        auto it = table_.find(p);
        if (it == table_.end())
            throw DataError("SatakeSpec '" + label_ + "': no Satake data at p=" + std::to_string(p));
        return it->second;
    }

    // a_pi(p^l) = sum_j alpha_j^l
    cplx a(std::uint64_t p, int l = 1) const {
        cplx s = 0.0;
        for (const auto& al : alphas(p)) {
            cplx v = 1.0;
            for (int i = 0; i < l; ++i) v *= al;
            s += v;
        }
        return s;
    }

    void validate() const {
        const double tol = 1e-12;
        for (const auto& [p, a] : table_) {
            const double bound =
                grc_ ? 1.0 : std::pow(double(p), 0.5 - 1.0 / (double(degree_) * degree_ + 1.0));
            for (const auto& al : a)
                if (std::abs(al) > bound + tol)
                    throw DataError("SatakeSpec '" + label_ + "': |alpha| exceeds bound at p=" + std::to_string(p));
        }
    }

private:
    int degree_ = 1;
    std::string label_ = "zeta";
    bool grc_ = true;
    std::optional<DirichletCharacter> character_;
    std::map<std::uint64_t, std::vector<cplx>> table_;
};

inline SatakeSpec satake_from_character(const DirichletCharacter& chi) { return SatakeSpec::from_character(chi); }

inline SatakeSpec zeta_spec() { return SatakeSpec::from_character(DirichletCharacter{}); }

// CSV with header and columns prime,j,re_alpha,im_alpha; j runs 1..m.
inline SatakeSpec read_satake_csv(std::istream& in, const std::string& label, bool grc) {
    std::map<std::uint64_t, std::map<int, cplx>> rows;
    std::string line;
    int degree = 0;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1 && line.find("prime") != std::string::npos) continue;
        std::stringstream ss(line);
        std::string f[4];
        for (int i = 0; i < 4; ++i)
            if (!std::getline(ss, f[i], ','))
                throw DataError("Satake CSV line " + std::to_string(lineno) + ": expected 4 columns");
        try {
            const auto p = std::stoull(f[0]);
            const int j = std::stoi(f[1]);
            if (j < 1) throw DataError("Satake CSV line " + std::to_string(lineno) + ": j must be >= 1");
            rows[p][j] = cplx(std::stod(f[2]), std::stod(f[3]));
            degree = std::max(degree, j);
        } catch (const std::logic_error&) {
            throw DataError("Satake CSV line " + std::to_string(lineno) + ": malformed number");
        }
    }
    std::map<std::uint64_t, std::vector<cplx>> table;
    for (auto& [p, m] : rows) {
        if (static_cast<int>(m.size()) != degree)
            throw DataError("Satake CSV: prime " + std::to_string(p) + " is missing parameters");
        std::vector<cplx> v;
        for (auto& [j, a] : m) v.push_back(a);
        table[p] = std::move(v);
    }
    return SatakeSpec::from_table(degree, label, std::move(table), grc);
}

inline SatakeSpec read_satake_csv(const std::string& path, const std::string& label, bool grc) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open Satake CSV: " + path);
    return read_satake_csv(in, label, grc);
}

} // namespace lmlab
