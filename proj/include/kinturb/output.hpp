#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "kinturb/euler.hpp"
#include "kinturb/grid.hpp"
#include "kinturb/solver.hpp"

namespace kinturb {

/// %.17g rendering used by every exporter; round-trips doubles exactly.
std::string format_g17(double x);

void write_euler_csv(const std::string& path, const SpaceGrid& sg,
                     const EulerFields& fields);
void write_unitvec_csv(const std::string& path, const SpaceGrid& sg,
                       const MaskedVectorField& unit);
void write_vorticity_csv(const std::string& path, const SpaceGrid& sg,
                         const MaskedScalarField& omega);

/// Manages one run's output directory: the per-step series files, snapshot
/// files, and a MANIFEST listing every file, the config hash, and whether
/// the run completed. The MANIFEST is rewritten as files are added so an
/// aborted run leaves a manifest marked incomplete.
class RunWriter {
 public:
  RunWriter(std::string dir, std::uint64_t config_hash);
  ~RunWriter();

  RunWriter(const RunWriter&) = delete;
  RunWriter& operator=(const RunWriter&) = delete;

  void append_budget(int step, double t, const MassBudget& budget);
  void append_report(int step, double t, const StepReport& report);

  void write_snapshot(int step, const SpaceGrid& sg, const EulerFields& fields,
                      const MaskedVectorField& unit, const MaskedScalarField& omega);

  void finalize(bool complete);

  const std::string& dir() const { return dir_; }

 private:
  void register_file(const std::string& name);
  void write_manifest();

  std::string dir_;
  std::uint64_t config_hash_;
  std::vector<std::string> files_;
  bool complete_ = false;
  bool finalized_ = false;
  std::ofstream budget_;
  std::ofstream report_;
};

}  // namespace kinturb
