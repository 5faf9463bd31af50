#include "kinturb/output.hpp"

#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace kinturb {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("output: cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

void write_euler_csv(const std::string& path, const SpaceGrid& sg,
                     const EulerFields& fields) {
  std::ofstream out = open_out(path);
  out << "k1,k2,x1,x2,rho,p1,p2,v1,v2,defined\n";
  for (int k1 = 0; k1 < sg.M1; ++k1) {
    for (int k2 = 0; k2 < sg.M2; ++k2) {
      const size_t i = fields.impulse.idx(k1, k2);
      const bool defined = fields.velocity.defined[i] != 0;
      out << k1 << ',' << k2 << ',' << format_g17(sg.x1(k1)) << ','
          << format_g17(sg.x2(k2)) << ',' << format_g17(fields.rho.v[i]) << ','
          << format_g17(fields.impulse.c1[i]) << ','
          << format_g17(fields.impulse.c2[i]) << ','
          << format_g17(defined ? fields.velocity.c1[i] : 0.0) << ','
          << format_g17(defined ? fields.velocity.c2[i] : 0.0) << ','
          << (defined ? 1 : 0) << '\n';
    }
  }
}

void write_unitvec_csv(const std::string& path, const SpaceGrid& sg,
                       const MaskedVectorField& unit) {
  std::ofstream out = open_out(path);
  out << "x1,x2,u1,u2\n";
  for (int k1 = 0; k1 < sg.M1; ++k1) {
    for (int k2 = 0; k2 < sg.M2; ++k2) {
      const size_t i = unit.idx(k1, k2);
      if (!unit.defined[i]) continue;
      out << format_g17(sg.x1(k1)) << ',' << format_g17(sg.x2(k2)) << ','
          << format_g17(unit.c1[i]) << ',' << format_g17(unit.c2[i]) << '\n';
    }
  }
}

void write_vorticity_csv(const std::string& path, const SpaceGrid& sg,
                         const MaskedScalarField& omega) {
  std::ofstream out = open_out(path);
  out << "k1,k2,x1,x2,omega,defined\n";
  for (int k1 = 0; k1 < sg.M1; ++k1) {
    for (int k2 = 0; k2 < sg.M2; ++k2) {
      const size_t i = omega.idx(k1, k2);
      const bool defined = omega.defined[i] != 0;
      out << k1 << ',' << k2 << ',' << format_g17(sg.x1(k1)) << ','
          << format_g17(sg.x2(k2)) << ',' << format_g17(defined ? omega.v[i] : 0.0)
          << ',' << (defined ? 1 : 0) << '\n';
    }
  }
}

RunWriter::RunWriter(std::string dir, std::uint64_t config_hash)
    : dir_(std::move(dir)), config_hash_(config_hash) {
  std::filesystem::create_directories(dir_);
  budget_ = open_out(dir_ + "/massbudget.csv");
  budget_ << "step,t,mass,dm_dt,impulse_flux,diffusive_flux,residual\n";
  register_file("massbudget.csv");
  report_ = open_out(dir_ + "/report.csv");
  report_ << "step,t,picard_iters,linear_iters_total,final_picard_delta,"
             "final_linear_residual,nor\n";
  register_file("report.csv");
}

RunWriter::~RunWriter() {
  if (!finalized_) {
    try {
      finalize(false);
    } catch (...) {
    }
  }
}

void RunWriter::append_budget(int step, double t, const MassBudget& b) {
  budget_ << step << ',' << format_g17(t) << ',' << format_g17(b.mass) << ','
          << format_g17(b.dm_dt) << ',' << format_g17(b.impulse_flux) << ','
          << format_g17(b.diffusive_flux) << ',' << format_g17(b.residual) << '\n';
}

void RunWriter::append_report(int step, double t, const StepReport& r) {
  report_ << step << ',' << format_g17(t) << ',' << r.picard_iters << ','
          << r.linear_iters_total << ',' << format_g17(r.final_picard_delta) << ','
          << format_g17(r.final_linear_residual) << ',' << format_g17(r.nor) << '\n';
}

void RunWriter::write_snapshot(int step, const SpaceGrid& sg,
                               const EulerFields& fields,
                               const MaskedVectorField& unit,
                               const MaskedScalarField& omega) {
  const std::string suffix = std::to_string(step) + ".csv";
  write_euler_csv(dir_ + "/euler_" + suffix, sg, fields);
  register_file("euler_" + suffix);
  write_unitvec_csv(dir_ + "/unitvec_" + suffix, sg, unit);
  register_file("unitvec_" + suffix);
  write_vorticity_csv(dir_ + "/vorticity_" + suffix, sg, omega);
  register_file("vorticity_" + suffix);
}

void RunWriter::register_file(const std::string& name) {
  files_.push_back(name);
  write_manifest();
}

void RunWriter::write_manifest() {
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash_));
  std::ofstream out = open_out(dir_ + "/MANIFEST");
  out << "manifest-version 1\n";
  out << "config_hash " << hash << "\n";
  out << "complete " << (complete_ ? 1 : 0) << "\n";
  for (const auto& f : files_) out << "file " << f << "\n";
}

void RunWriter::finalize(bool complete) {
  complete_ = complete;
  budget_.flush();
  report_.flush();
  write_manifest();
  finalized_ = true;
}

}  // namespace kinturb
