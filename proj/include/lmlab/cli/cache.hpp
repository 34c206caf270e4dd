#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>

#include "../lfunc/grid.hpp"
#include "../lfunc/grid_pool.hpp"
#include "digest.hpp"

namespace lmlab::cli {

inline constexpr const char* cache_env = "LMLAB_CACHE_DIR";

// Directory from the environment, empty when unset.
inline std::string cache_dir_from_env() {
    const char* v = std::getenv(cache_env);
    return v ? std::string(v) : std::string();
}

// On-disk grid store keyed exactly by (id, t0, t1, delta, clamp_floor, precision, version).
class GridCache {
public:
    explicit GridCache(std::filesystem::path dir, std::uint32_t version = grid_format_version,
                       std::ostream* warnings = nullptr)
        : dir_(std::move(dir)), version_(version), warn_(warnings) {
        std::filesystem::create_directories(dir_);
    }

    static std::string key(const std::string& id, double t0, double t1, double delta, const GridOptions& opt,
                           std::uint32_t version) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "|%.17g|%.17g|%.17g|%.17g|%.17g|v%u", t0, t1, delta, opt.clamp_floor,
                      opt.precision, version);
        return id + buf;
    }

    std::filesystem::path path_for(const std::string& id, double t0, double t1, double delta,
                                   const GridOptions& opt) const {
        std::string stem;
        for (char c : id) stem += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
        return dir_ / (stem + "-" + sha256_hex(key(id, t0, t1, delta, opt, version_)).substr(0, 20) + ".lmgrid");
    }

    CriticalLineGrid get(const LFunctionId& id, double t0, double t1, double delta, const GridOptions& opt = {}) {
        const auto path = path_for(id.canonical(), t0, t1, delta, opt);
        if (std::filesystem::exists(path)) {
            try {
                auto g = load(path, id.canonical(), t0, t1, delta, opt);
                count(hits_);
                return g;
            } catch (const DataError& e) {
                if (warn_) *warn_ << "warning: evicting corrupt cache entry " << path.string() << ": " << e.what() << "\n";
                std::filesystem::remove(path);
                count(evictions_);
            }
        }
        count(misses_);
        auto g = log_abs_grid(id, t0, t1, delta, opt);
        store(path, g);
        return g;
    }

    // Grid-pool hook for grids anchored at t = 1.
    GridPtr provide(const LFunctionId& id, double t1, double delta, const GridOptions& opt) {
        return std::make_shared<const CriticalLineGrid>(get(id, 1.0, t1, delta, opt));
    }

    void attach(GridPool& pool) {
        const GridOptions opt = pool.options();
        pool.compute = [this, opt](const LFunctionId& id, double t1, double delta) { return provide(id, t1, delta, opt); };
    }

    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }
    std::size_t evictions() const { return evictions_; }
    std::uint32_t version() const { return version_; }
    const std::filesystem::path& dir() const { return dir_; }

private:
    CriticalLineGrid load(const std::filesystem::path& path, const std::string& id, double t0, double t1,
                          double delta, const GridOptions& opt) const {
        std::ifstream in(path, std::ios::binary);
        GridHeader h;
        if (!in || !read_grid_header(in, h)) throw DataError("bad header");
        if (h.id != id || h.t0 != t0 || h.t1 != t1 || h.delta != delta || h.clamp_floor != opt.clamp_floor ||
            h.precision != opt.precision || h.version != version_)
            throw DataError("key mismatch");
        in.seekg(0);
        return read_grid(in);
    }

    void store(const std::filesystem::path& path, const CriticalLineGrid& g) const {
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            write_grid(out, g, version_);
            if (!out) throw DataError("cannot write cache entry " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
    }

    void count(std::size_t& c) {
        std::lock_guard lock(mu_);
        ++c;
    }

    std::filesystem::path dir_;
    std::uint32_t version_;
    std::ostream* warn_;
    std::mutex mu_;
    std::size_t hits_ = 0, misses_ = 0, evictions_ = 0;
};

} // namespace lmlab::cli
