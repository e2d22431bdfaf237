#pragma once

#include "bmgame/corpus.hpp"
#include "bmgame/monitor.hpp"

#include <string>
#include <vector>

namespace bmg::detail {

GameBundle make_ex_nobound();
GameBundle make_ex_nomove();
GameBundle make_ex_wwR();
GameBundle make_ex_pos();
GameBundle make_ex_omegaS();
GameBundle make_ex_rho_target();
GameBundle make_ex_phi_lastmove();
GameBundle make_ex_phi_bounded();
GameBundle make_ex_buchi();

std::vector<Vertex> repeat(Vertex v, std::size_t n);
std::string pass_or(bool ok, const std::string& why);

/// Initial zero run versus later one runs (the unbounded-strategy example).
class LongerRunMonitor final : public PrefixMonitor {
public:
    MonitorState initial(Vertex start) const override;
    MonitorState step(const MonitorState& state, Vertex next) const override;
    MonitorStatus status(const MonitorState& state) const override;
};

/// "sigma_{a_n} = 1 for some n > 1", start vertex 0.
class TriangularMonitor final : public PrefixMonitor {
public:
    MonitorState initial(Vertex start) const override;
    MonitorState step(const MonitorState& state, Vertex next) const override;
    MonitorStatus status(const MonitorState& state) const override;
};

/// "a 0-run of length >= n followed by 1 occurs".
class RunLengthMonitor final : public PrefixMonitor {
public:
    explicit RunLengthMonitor(std::size_t n) : n_(n) {}
    MonitorState initial(Vertex start) const override;
    MonitorState step(const MonitorState& state, Vertex next) const override;
    MonitorStatus status(const MonitorState& state) const override;

private:
    std::int64_t n_;
};

/// At least n positions i with path[i] == rho_target_at(i).
class TargetMatchMonitor final : public PrefixMonitor {
public:
    explicit TargetMatchMonitor(std::size_t n) : n_(n) {}
    MonitorState initial(Vertex start) const override;
    MonitorState step(const MonitorState& state, Vertex next) const override;
    MonitorStatus status(const MonitorState& state) const override;

private:
    std::int64_t n_;
};

} // namespace bmg::detail
