#include "rwdir/walk.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>

#include "rwdir/error.hpp"

namespace rwdir {

namespace {

double lattice_norm(std::span<const std::int64_t> s) {
  long double sum = 0.0L;
  for (std::int64_t x : s) {
    const long double v = static_cast<long double>(x);
    sum += v * v;
  }
  return static_cast<double>(std::sqrt(sum));
}

nlohmann::json ext_to_json(const ExtReal& x) {
  const double v = x.to_double();
  if (std::isfinite(v) && (v != 0.0 || x.is_zero())) return v;
  return x.to_string();
}

std::string csv_header(std::size_t d) {
  std::string h = "n";
  for (std::size_t i = 1; i <= d; ++i) h += ",S_" + std::to_string(i);
  h += ",norm";
  for (std::size_t i = 1; i <= d; ++i) h += ",dir_" + std::to_string(i);
  h += ",M,B,k\n";
  return h;
}

std::string csv_rows(const std::vector<TrajectoryRow>& rows, std::size_t d, bool lattice) {
  std::string out = csv_header(d);
  for (const TrajectoryRow& row : rows) {
    out += std::to_string(row.n);
    for (std::size_t i = 0; i < d; ++i) {
      out += ',';
      out += lattice ? std::to_string(row.lattice_position[i]) : row.position[i].to_string();
    }
    out += ',' + row.norm.to_string();
    for (double c : row.direction) out += ',' + format_double(c);
    out += ',';
    if (row.max_xi) out += row.max_xi->to_string();
    out += ',';
    if (row.rest) out += row.rest->to_string();
    out += ',';
    if (row.k) out += std::to_string(*row.k);
    out += '\n';
  }
  return out;
}

nlohmann::json rows_json(const std::vector<TrajectoryRow>& rows, bool lattice) {
  nlohmann::json out = nlohmann::json::array();
  for (const TrajectoryRow& row : rows) {
    nlohmann::json r;
    r["n"] = row.n;
    nlohmann::json s = nlohmann::json::array();
    for (std::size_t i = 0; i < row.position.size(); ++i) {
      if (lattice) {
        s.push_back(row.lattice_position[i]);
      } else {
        s.push_back(ext_to_json(row.position[i]));
      }
    }
    r["S"] = std::move(s);
    r["norm"] = ext_to_json(row.norm);
    r["direction"] = row.direction;
    if (row.max_xi) r["M"] = ext_to_json(*row.max_xi);
    if (row.rest) r["B"] = ext_to_json(*row.rest);
    if (row.k) r["k"] = *row.k;
    out.push_back(std::move(r));
  }
  return out;
}

TrajectoryRow make_row(const WalkState& state, std::span<const double> direction) {
  TrajectoryRow row;
  row.n = state.n;
  if (state.lattice) row.lattice_position = state.lattice_position;
  for (std::size_t i = 0; i < state.dimension; ++i) row.position.push_back(state.component(i));
  row.norm = state.norm();
  row.direction.assign(direction.begin(), direction.end());
  if (state.radial && state.n > 0) {
    row.max_xi = state.max_xi;
    row.rest = state.rest;
    row.k = state.k;
  }
  return row;
}

template <typename Call>
void call_observer(WalkObserver& observer, std::uint64_t n, const char* phase, Call&& call) {
  try {
    call();
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kObserverFailure, "observer '" + std::string(observer.name()) + "' failed in " + phase +
                                                 " at n=" + std::to_string(n) + ": " + e.what());
  }
}

}  // namespace

WalkState WalkState::initial(const IncrementSampler& sampler) {
  WalkState s;
  s.dimension = sampler.dimension();
  s.lattice = sampler.lattice();
  s.radial = sampler.radial();
  if (s.lattice) {
    s.lattice_position.assign(s.dimension, 0);
  } else {
    s.real_position = ExtVec(s.dimension);
  }
  return s;
}

ExtReal WalkState::norm() const {
  if (lattice) return ExtReal(lattice_norm(lattice_position));
  return real_position.norm();
}

bool WalkState::at_origin() const {
  if (lattice) {
    for (std::int64_t x : lattice_position) {
      if (x != 0) return false;
    }
    return true;
  }
  return real_position.is_zero();
}

void WalkState::position(std::span<double> out) const {
  if (lattice) {
    for (std::size_t i = 0; i < dimension; ++i) out[i] = static_cast<double>(lattice_position[i]);
  } else {
    real_position.to_doubles(out);
  }
}

void WalkState::direction(std::span<double> out) const {
  if (lattice) {
    const double length = lattice_norm(lattice_position);
    for (std::size_t i = 0; i < dimension; ++i) {
      out[i] = length > 0.0 ? static_cast<double>(lattice_position[i]) / length : 0.0;
    }
  } else {
    real_position.direction(out);
  }
}

ExtReal WalkState::component(std::size_t i) const {
  if (lattice) return ExtReal(static_cast<double>(lattice_position[i]));
  return real_position.component(i);
}

bool advance(WalkState& state, const IncrementDraw& draw, const IncrementSampler& sampler) {
  (void)sampler;
  if (state.lattice) {
    std::int64_t next[64];
    std::vector<std::int64_t> heap;
    std::int64_t* out = next;
    if (state.dimension > 64) {
      heap.resize(state.dimension);
      out = heap.data();
    }
    for (std::size_t i = 0; i < state.dimension; ++i) {
      if (__builtin_add_overflow(state.lattice_position[i], draw.lattice[i], &out[i]) ||
          out[i] > kSaturationCap || out[i] < -kSaturationCap) {
        state.overflow = true;
        return false;
      }
    }
    std::copy(out, out + state.dimension, state.lattice_position.begin());
  } else {
    state.real_position += ExtVec::from_components(draw.real);
  }
  ++state.n;
  if (draw.saturated) ++state.saturations;

  if (state.radial) {
    const ExtReal& xi = draw.xi;
    if (state.n == 1 || xi > state.max_xi) {
      // Strict '>': a tie keeps the earlier index.
      if (state.n > 1) state.rest += state.max_xi;
      state.max_xi = xi;
      state.k = state.n;
      state.atom_at_max = draw.atom;
      state.q_at_max = sampler.spec().atoms[draw.atom].vector;
    } else {
      state.rest += xi;
    }
  }
  return true;
}

WalkState step(WalkState state, const IncrementDraw& draw, const IncrementSampler& sampler) {
  advance(state, draw, sampler);
  return state;
}

BoundCheck biggest_jump_bound_check(const WalkState& state) {
  if (!state.radial) throw Error(ErrorCode::kUnsupportedSpec, "biggest-jump bound needs a RADIAL_PRODUCT walk");
  if (state.n == 0 || state.at_origin() || !(state.max_xi > ExtReal(0.0))) {
    throw Error(ErrorCode::kInvalidState, "biggest-jump bound needs S_n != 0 and M_n > 0");
  }
  BoundCheck check;
  check.rho = (state.rest / state.max_xi).to_double();
  std::vector<double> dir(state.dimension);
  state.direction(dir);
  double sum = 0.0;
  for (std::size_t i = 0; i < state.dimension; ++i) {
    const double diff = dir[i] - state.q_at_max[i];
    sum += diff * diff;
  }
  check.actual = std::sqrt(sum);
  if (check.rho >= 1.0) {
    check.applicable = false;
    check.bound = std::numeric_limits<double>::infinity();
    check.ok = true;
    return check;
  }
  check.bound = 2.0 * check.rho / (1.0 - check.rho);
  check.ok = check.actual <= check.bound + 1e-9;
  return check;
}

std::vector<std::uint64_t> dyadic_checkpoints(std::uint64_t n_steps) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n < n_steps; n *= 2) out.push_back(n);
  if (n_steps > 0) out.push_back(n_steps);
  return out;
}

std::string TrajectoryRecord::to_csv() const { return csv_rows(checkpoints, dimension, lattice); }

std::string TrajectoryRecord::dense_to_csv() const { return csv_rows(dense, dimension, lattice); }

nlohmann::json TrajectoryRecord::to_json() const {
  return {
      {"dimension", dimension},
      {"lattice", lattice},
      {"radial", radial},
      {"seed", seed},
      {"stream", stream},
      {"requested_steps", requested_steps},
      {"completed_steps", completed_steps},
      {"halted", halted},
      {"saturations", saturations},
      {"checkpoints", rows_json(checkpoints, lattice)},
      {"dense", rows_json(dense, lattice)},
  };
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string TrajectoryRecord::hash() const { return fnv1a_hex(to_csv() + dense_to_csv()); }

TrajectoryRecord run_walk(const IncrementSpec& spec, std::uint64_t n_steps, const RandomStream& stream,
                          std::span<WalkObserver* const> observers, const WalkOptions& options) {
  if (n_steps < 1) throw Error(ErrorCode::kInvalidParameter, "n_steps must be >= 1");
  const IncrementSampler sampler(spec);
  RandomStream rng = stream;
  WalkState state = WalkState::initial(sampler);
  const std::size_t d = state.dimension;

  TrajectoryRecord record;
  record.dimension = d;
  record.lattice = state.lattice;
  record.radial = state.radial;
  record.seed = stream.seed();
  record.stream = stream.stream();
  record.requested_steps = n_steps;

  bool any_every_step = false;
  for (WalkObserver* o : observers) any_every_step |= o->cadence() == WalkObserver::Cadence::kEveryStep;

  std::vector<double> position(d, 0.0);
  std::vector<double> direction(d, 0.0);
  StepView view;
  view.position = position;
  view.direction = direction;
  view.state = &state;
  auto refresh = [&] {
    state.position(position);
    state.direction(direction);
    view.n = state.n;
    view.norm = state.norm();
    view.log_norm = view.norm.log();
  };
  refresh();

  const std::vector<std::uint64_t> schedule = dyadic_checkpoints(n_steps);
  std::size_t next_checkpoint = 0;
  IncrementDraw draw;
  auto emit_checkpoint = [&] {
    record.checkpoints.push_back(make_row(state, direction));
    for (WalkObserver* o : observers) {
      call_observer(*o, state.n, "checkpoint", [&] { o->checkpoint(view); });
    }
  };

  for (std::uint64_t n = 1; n <= n_steps; ++n) {
    sampler.draw(rng, draw);
    if (!advance(state, draw, sampler)) {
      record.halted = true;
      break;
    }
    const bool is_checkpoint = next_checkpoint < schedule.size() && schedule[next_checkpoint] == n;
    const bool is_dense = n <= options.dense_cap;
    if (!(any_every_step || is_checkpoint || is_dense)) continue;
    refresh();
    for (WalkObserver* o : observers) {
      if (o->cadence() == WalkObserver::Cadence::kEveryStep) {
        call_observer(*o, n, "observe", [&] { o->observe(view); });
      }
    }
    if (is_dense) record.dense.push_back(make_row(state, direction));
    if (is_checkpoint) {
      emit_checkpoint();
      ++next_checkpoint;
    }
  }

  if (record.halted) {
    refresh();
    if (state.n > 0 && (record.checkpoints.empty() || record.checkpoints.back().n != state.n)) emit_checkpoint();
  }
  record.completed_steps = state.n;
  record.saturations = state.saturations;
  for (WalkObserver* o : observers) {
    call_observer(*o, state.n, "finish", [&] { o->finish(view); });
  }
  return record;
}

TrajectoryRecord run_walk(const IncrementSpec& spec, std::uint64_t n_steps, std::uint64_t seed,
                          std::span<WalkObserver* const> observers, const WalkOptions& options) {
  return run_walk(spec, n_steps, RandomStream(seed), observers, options);
}

}  // namespace rwdir
