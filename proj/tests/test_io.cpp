// Copyright 2026 The qoct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "common.hpp"

using namespace qoct;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("qoct_io_" + name);
  fs::remove_all(p);
  return p;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string s;
  std::getline(in, s);
  return s;
}

}  // namespace

TEST(Io, NumberFormat) {
  EXPECT_EQ(io::num(0.08), "8.0000000000e-02");
  EXPECT_EQ(io::num(-2.5), "-2.5000000000e+00");
}

TEST(Io, FieldRoundTrip) {
  const auto dir = scratch("field");
  const auto f = Field::from_function(TimeGrid::make(10.0, 0.01), [](double t) { return 0.02 * std::sin(0.157 * t); });
  io::write_field(dir / "sub" / "f.csv", f);
  EXPECT_EQ(first_line(dir / "sub" / "f.csv"), "t (a.u.),eps (a.u.)");
  const auto g = io::read_field(dir / "sub" / "f.csv");
  EXPECT_EQ(g.time_grid().n_steps(), 1000u);
  for (std::size_t n = 0; n < f.size(); ++n) EXPECT_NEAR(g[n], f[n], 1e-12);
}

TEST(Io, RejectsNonUniformTime) {
  const auto dir = scratch("bad");
  fs::create_directories(dir);
  std::ofstream(dir / "f.csv") << "t,eps\n0,0\n0.1,0\n0.25,0\n";
  EXPECT_THROW(io::read_field(dir / "f.csv"), GridMismatch);
  std::ofstream(dir / "g.csv") << "t,eps\n0.1,0\n0.2,0\n";
  EXPECT_THROW(io::read_field(dir / "g.csv"), InvalidArgument);
  EXPECT_THROW(io::read_field(dir / "missing.csv"), InvalidArgument);
}

TEST(Io, EigensetFiles) {
  const auto dir = scratch("eigen");
  io::write_eigenset(dir, fixture::scan_eigenset());
  for (const char* f : {"energies.csv", "excitations.csv", "dipoles.csv", "states.csv"}) EXPECT_TRUE(fs::exists(dir / f));
  EXPECT_EQ(first_line(dir / "excitations.csv"), "m,n,omega_mn (a.u.)");
  std::ifstream in(dir / "excitations.csv");
  std::size_t rows = 0;
  for (std::string s; std::getline(in, s);) ++rows;
  EXPECT_EQ(rows, 11u);
}

TEST(Io, OccupationsHeader) {
  const auto dir = scratch("occ");
  const auto& e = fixture::scan_eigenset();
  const auto s = occupations(fixture::scan_hamiltonian(), e.states[0], Field(TimeGrid::make(1.0, 0.005)), e, 100);
  io::write_occupations(dir / "occupations.csv", s);
  EXPECT_EQ(first_line(dir / "occupations.csv"), "t (a.u.),p0,p1,p2,p3,p4,residual");
}
