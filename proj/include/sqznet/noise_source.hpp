#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>

#include "sqznet/errors.hpp"

namespace sqznet {

// Variance spectrum of one quadrature of a noise source, in shot-noise
// units as a function of sideband frequency omega (rad/s). Vacuum is
// identically 1.
using SpectrumFn = std::function<double(double)>;

enum class NoiseKind { Vacuum, Classical };

struct NoiseSource {
    std::string id;
    NoiseKind kind = NoiseKind::Vacuum;
    SpectrumFn plus;  // amplitude-quadrature variance V+(omega)
    SpectrumFn minus; // phase-quadrature variance V-(omega)

    double v_plus(double omega) const { return plus ? plus(omega) : 1.0; }
    double v_minus(double omega) const { return minus ? minus(omega) : 1.0; }
};

// Every independent vacuum port and classical noise input in a network is
// registered here under a unique id. Field coefficient tables refer to
// sources by id, so the registry is the single authority on what exists.
class SourceRegistry {
  public:
    const NoiseSource& add_vacuum(const std::string& id) {
        return insert(NoiseSource{id, NoiseKind::Vacuum, nullptr, nullptr});
    }

    const NoiseSource& add_classical(const std::string& id, SpectrumFn plus, SpectrumFn minus) {
        return insert(NoiseSource{id, NoiseKind::Classical, std::move(plus), std::move(minus)});
    }

    // Mint a new vacuum source with a unique id derived from `hint`.
    // Used by components that inject fresh vacuum (losses, open ports).
    const NoiseSource& add_fresh_vacuum(const std::string& hint) {
        std::string id = hint;
        while (sources_.count(id))
            id = hint + "." + std::to_string(++fresh_counter_);
        return add_vacuum(id);
    }

    const NoiseSource& at(const std::string& id) const {
        auto it = sources_.find(id);
        if (it == sources_.end())
            throw UnknownSourceError(id);
        return it->second;
    }

    bool contains(const std::string& id) const { return sources_.count(id) != 0; }

    // Ordered map: iteration order is the id's lexicographic order, which
    // keeps every downstream sum and report deterministic.
    const std::map<std::string, NoiseSource>& all() const { return sources_; }

  private:
    const NoiseSource& insert(NoiseSource s) {
        if (s.id.empty())
            throw ConfigError("noise source id must be nonempty");
        auto [it, fresh] = sources_.emplace(s.id, std::move(s));
        if (!fresh)
            throw ConfigError("duplicate noise source id '" + it->first + "'");
        return it->second;
    }

    std::map<std::string, NoiseSource> sources_;
    unsigned fresh_counter_ = 0;
};

} // namespace sqznet
