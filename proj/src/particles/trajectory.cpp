#include "selfex/particles/trajectory.hpp"

#include <algorithm>

#include "selfex/analysis/metrics.hpp"
#include "selfex/core/error.hpp"
#include "selfex/io/text.hpp"
#include "selfex/particles/stepping.hpp"

namespace selfex {

SnapshotSummary summarize(const std::vector<double>& x) {
  const Moments m = moments(x);
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return {m.mean, m.second_moment, m.variance, *lo, *hi};
}

namespace {

double second_moment_fast(const std::vector<double>& x) {
  double s = 0.0;
  for (const double v : x) s += v * v;
  return s / static_cast<double>(x.size());
}

}  // namespace

TrajectoryRecord run_trajectory(ParticleSystem initial, const Dynamics& dyn,
                                const SimConfig& cfg, const SeededStream& stream,
                                bool snapshots) {
  dyn.params.validate();
  cfg.validate(dyn.params);
  if (initial.kind == ProcessKind::MckeanVlasov) {
    require(dyn.drift.has_value(), "McKean-Vlasov trajectory needs a mean-field drift");
    dyn.drift->check_compatible(dyn.kernel);
  }

  TrajectoryRecord rec;
  ParticleSystem sys = std::move(initial);
  const auto record = [&] {
    TrajectoryPoint p;
    p.t = sys.t;
    p.step = sys.step;
    p.summary = summarize(sys.x);
    if (snapshots) p.snapshot = sys.x;
    rec.points.push_back(std::move(p));
  };

  const std::uint64_t total = cfg.steps();
  StepScratch scratch;
  rec.max_second_moment = second_moment_fast(sys.x);
  record();
  while (sys.step < total) {
    switch (sys.kind) {
      case ProcessKind::Interacting:
        advance_interacting(sys, dyn.params, dyn.kernel, cfg, stream, scratch);
        break;
      case ProcessKind::Intermediate:
        advance_intermediate(sys, dyn.params, dyn.kernel, cfg, stream, scratch);
        break;
      case ProcessKind::MckeanVlasov:
        advance_mckean(sys, dyn.params, dyn.kernel, *dyn.drift, cfg, stream, scratch);
        break;
    }
    rec.max_second_moment = std::max(rec.max_second_moment, second_moment_fast(sys.x));
    if (sys.step % cfg.record_stride == 0 || sys.step == total) record();
  }
  rec.final_state = std::move(sys);
  return rec;
}

void write_trajectory_ndjson(std::ostream& out, const TrajectoryRecord& rec) {
  out << "{\"schema\":\"selfex.trajectory\",\"version\":" << io::kSchemaVersion
      << ",\"process\":\"" << to_string(rec.final_state.kind)
      << "\",\"n\":" << rec.final_state.size() << "}\n";
  for (const auto& p : rec.points) {
    out << "{\"t\":" << io::number(p.t) << ",\"step\":" << p.step
        << ",\"mean\":" << io::number(p.summary.mean)
        << ",\"second_moment\":" << io::number(p.summary.second_moment)
        << ",\"variance\":" << io::number(p.summary.variance)
        << ",\"min\":" << io::number(p.summary.min) << ",\"max\":" << io::number(p.summary.max);
    if (!p.snapshot.empty()) {
      out << ",\"x\":[";
      for (std::size_t i = 0; i < p.snapshot.size(); ++i) {
        if (i) out << ',';
        out << io::number(p.snapshot[i]);
      }
      out << ']';
    }
    out << "}\n";
  }
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& rec) {
  out << "# schema=selfex.trajectory.csv version=" << io::kSchemaVersion << '\n';
  out << "t,step,mean,second_moment,variance,min,max\n";
  for (const auto& p : rec.points) {
    out << io::number(p.t) << ',' << p.step << ',' << io::number(p.summary.mean) << ','
        << io::number(p.summary.second_moment) << ',' << io::number(p.summary.variance) << ','
        << io::number(p.summary.min) << ',' << io::number(p.summary.max) << '\n';
  }
}

}  // namespace selfex
