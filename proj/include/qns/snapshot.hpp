#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qns/field.hpp"

namespace qns {

/// One named field in a snapshot file. Scalar fields have one component.
struct SnapshotRecord {
  std::string name;
  double time = 0.0;
  std::vector<ScalarField> components;
};

/// Text snapshot container. A file holds one or more records:
///
///   QNSSNAP 1
///   name <identifier>
///   time <real>
///   dim <d>
///   n <n_0> [n_1 [n_2]]
///   length <L_0> [L_1 [L_2]]
///   components <c>
///   data
///   <c * N values, component-major, row-major nodes, one per line, %.17g>
///   end
void write_snapshot(std::ostream& os, const SnapshotRecord& record);
void write_snapshot_file(const std::filesystem::path& path, const std::vector<SnapshotRecord>& records);

std::vector<SnapshotRecord> read_snapshots(std::istream& is);
std::vector<SnapshotRecord> read_snapshot_file(const std::filesystem::path& path);

SnapshotRecord scalar_record(std::string name, double time, const ScalarField& f);
SnapshotRecord vector_record(std::string name, double time, const VectorField& F);
VectorField as_vector(const SnapshotRecord& record);

}  // namespace qns
