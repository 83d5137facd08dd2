// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/trajectory.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"
#include "core/json_fields.hpp"

namespace riskbandit {
namespace {

constexpr const char* kMagic = "# riskbandit trajectory v1";

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const std::string& source, std::size_t line) {
  if (text.empty()) throw ParseError(source, line, "empty numeric field");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ParseError(source, line, "not a finite number: '" + text + "'");
  }
  return v;
}

nlohmann::json parse_header_json(const std::string& text, const std::string& source,
                                 std::size_t line) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source, line, std::string("malformed header JSON: ") + e.what());
  }
}

}  // namespace

nlohmann::json risk_to_json(const RiskSpec& risk) {
  if (risk.is_cvar()) return {{"kind", "cvar"}, {"alpha", risk.alpha()}};
  return {{"kind", "kusuoka"}, {"mu", risk.mu()}};
}

RiskSpec risk_from_json(const nlohmann::json& doc, const std::string& path) {
  namespace jf = json_fields;
  const std::string kind = jf::string(doc, "kind", path);
  try {
    if (kind == "cvar") return RiskSpec::cvar(jf::number(doc, "alpha", path));
    if (kind == "kusuoka") {
      return RiskSpec::kusuoka(
          jf::as_number_list(jf::require(doc, "mu", path), jf::join(path, "mu")));
    }
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(jf::join(path, "kind"), "unknown risk kind '" + kind + "'");
}

Trajectory::Trajectory(std::string algorithm, nlohmann::json environment, RiskSpec risk,
                       std::size_t dim, std::uint64_t horizon)
    : algorithm_(std::move(algorithm)),
      environment_(std::move(environment)),
      risk_(std::move(risk)),
      dim_(dim),
      horizon_(horizon) {
  if (dim_ == 0) throw DomainError("trajectory dimension must be at least 1");
  points_.reserve(dim_ * horizon_);
  losses_.reserve(horizon_);
}

void Trajectory::append(const Vector& point, double loss) {
  if (static_cast<std::size_t>(point.size()) != dim_) {
    throw DomainError("trajectory point has the wrong dimension");
  }
  if (!(loss >= 0.0 && loss <= 1.0)) throw DomainError("trajectory loss outside [0, 1]");
  points_.insert(points_.end(), point.data(), point.data() + point.size());
  losses_.push_back(loss);
}

Vector Trajectory::point(std::size_t index) const {
  if (index >= length()) throw DomainError("trajectory row index out of range");
  return Eigen::Map<const Vector>(points_.data() + index * dim_, static_cast<Eigen::Index>(dim_));
}

void Trajectory::write_csv(std::ostream& out) const {
  out << kMagic << '\n';
  out << "# config_hash: " << config_hash_ << '\n';
  out << "# algorithm: " << algorithm_ << '\n';
  out << "# horizon: " << horizon_ << '\n';
  out << "# environment: " << environment_.dump() << '\n';
  out << "# risk: " << risk_to_json(risk_).dump() << '\n';
  if (seed_) {
    const nlohmann::json seed{
        {"master", seed_->master}, {"replication", seed_->replication}, {"horizon", seed_->horizon}};
    out << "# seed: " << seed.dump() << '\n';
  }
  out << 't';
  for (std::size_t j = 0; j < dim_; ++j) out << ",x_" << j;
  out << ",loss\n";
  for (std::size_t i = 0; i < length(); ++i) {
    out << (i + 1);
    for (std::size_t j = 0; j < dim_; ++j) out << ',' << format_double(points_[i * dim_ + j]);
    out << ',' << format_double(losses_[i]) << '\n';
  }
}

void Trajectory::write_csv_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  write_csv(out);
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

Trajectory Trajectory::read_csv(std::istream& in, const std::string& source) {
  Trajectory traj;
  std::string line;
  std::size_t line_no = 0;
  bool have_magic = false;
  bool have_env = false;
  bool have_risk = false;
  bool have_columns = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (line[0] == '#') {
      if (have_columns) throw ParseError(source, line_no, "header line after data columns");
      if (line == kMagic) {
        have_magic = true;
        continue;
      }
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = line.substr(2, colon - 2);
      std::string value = line.substr(colon + 1);
      if (!value.empty() && value[0] == ' ') value.erase(0, 1);
      if (key == "config_hash") {
        traj.config_hash_ = value;
      } else if (key == "algorithm") {
        traj.algorithm_ = value;
      } else if (key == "horizon") {
        traj.horizon_ = static_cast<std::uint64_t>(parse_double(value, source, line_no));
      } else if (key == "environment") {
        traj.environment_ = parse_header_json(value, source, line_no);
        have_env = true;
      } else if (key == "risk") {
        try {
          traj.risk_ = risk_from_json(parse_header_json(value, source, line_no));
        } catch (const ConfigError& e) {
          throw ParseError(source, line_no, e.what());
        }
        have_risk = true;
      } else if (key == "seed") {
        const auto doc = parse_header_json(value, source, line_no);
        try {
          traj.seed_ = SeedInfo{json_fields::as_unsigned(doc.at("master"), "seed.master"),
                                json_fields::as_unsigned(doc.at("replication"), "seed.replication"),
                                json_fields::as_unsigned(doc.at("horizon"), "seed.horizon")};
        } catch (const std::exception& e) {
          throw ParseError(source, line_no, std::string("malformed seed header: ") + e.what());
        }
      }
      continue;
    }

    if (!have_columns) {
      if (!have_magic) throw ParseError(source, line_no, "missing trajectory header block");
      if (!have_env || !have_risk) {
        throw ParseError(source, line_no, "header block lacks environment or risk");
      }
      const auto cols = split(line, ',');
      if (cols.size() < 3 || cols.front() != "t" || cols.back() != "loss") {
        throw ParseError(source, line_no, "expected column header t,x_0,...,loss");
      }
      traj.dim_ = cols.size() - 2;
      for (std::size_t j = 0; j < traj.dim_; ++j) {
        if (cols[j + 1] != "x_" + std::to_string(j)) {
          throw ParseError(source, line_no, "unexpected column '" + cols[j + 1] + "'");
        }
      }
      have_columns = true;
      continue;
    }

    const auto fields = split(line, ',');
    if (fields.size() != traj.dim_ + 2) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(traj.dim_ + 2) + " fields, found " +
                           std::to_string(fields.size()));
    }
    const double t = parse_double(fields[0], source, line_no);
    if (t != static_cast<double>(traj.length() + 1)) {
      throw ParseError(source, line_no, "round index must increase by one from 1");
    }
    for (std::size_t j = 0; j < traj.dim_; ++j) {
      traj.points_.push_back(parse_double(fields[j + 1], source, line_no));
    }
    const double loss = parse_double(fields.back(), source, line_no);
    if (!(loss >= 0.0 && loss <= 1.0)) throw ParseError(source, line_no, "loss outside [0, 1]");
    traj.losses_.push_back(loss);
  }
  if (!have_columns) throw ParseError(source, line_no, "no column header found");
  if (traj.horizon_ != 0 && traj.length() > traj.horizon_) {
    throw ParseError(source, line_no, "more rows than the declared horizon");
  }
  return traj;
}

Trajectory Trajectory::read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  return read_csv(in, path);
}

}  // namespace riskbandit
