#include "qns/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qns {

namespace {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string expect_key(std::istream& is, const std::string& key) {
  std::string line;
  while (std::getline(is, line) && line.empty()) {
  }
  std::istringstream ls(line);
  std::string k;
  ls >> k;
  if (k != key) throw std::runtime_error("snapshot: expected '" + key + "', got '" + line + "'");
  std::string rest;
  std::getline(ls, rest);
  const auto start = rest.find_first_not_of(' ');
  return start == std::string::npos ? std::string{} : rest.substr(start);
}

}  // namespace

void write_snapshot(std::ostream& os, const SnapshotRecord& record) {
  if (record.components.empty()) throw std::invalid_argument("snapshot: record has no components");
  const Grid& g = record.components.front().grid();
  os << "QNSSNAP 1\n";
  os << "name " << record.name << "\n";
  os << "time " << format_real(record.time) << "\n";
  os << "dim " << g.dim() << "\n";
  os << "n";
  for (int a = 0; a < g.dim(); ++a) os << ' ' << g.n(a);
  os << "\nlength";
  for (int a = 0; a < g.dim(); ++a) os << ' ' << format_real(g.length(a));
  os << "\ncomponents " << record.components.size() << "\ndata\n";
  for (const auto& c : record.components) {
    require_same_grid(g, c.grid(), "write_snapshot");
    for (double v : c.values()) os << format_real(v) << '\n';
  }
  os << "end\n";
}

void write_snapshot_file(const std::filesystem::path& path,
                         const std::vector<SnapshotRecord>& records) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("snapshot: cannot open " + path.string() + " for writing");
  for (const auto& r : records) write_snapshot(os, r);
}

std::vector<SnapshotRecord> read_snapshots(std::istream& is) {
  std::vector<SnapshotRecord> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line != "QNSSNAP 1") throw std::runtime_error("snapshot: bad magic line '" + line + "'");
    SnapshotRecord rec;
    rec.name = expect_key(is, "name");
    rec.time = std::stod(expect_key(is, "time"));
    const int dim = std::stoi(expect_key(is, "dim"));
    std::array<int, 3> n{1, 1, 1};
    std::array<double, 3> len{1.0, 1.0, 1.0};
    {
      std::istringstream ns(expect_key(is, "n"));
      for (int a = 0; a < dim; ++a) ns >> n[a];
      std::istringstream lsn(expect_key(is, "length"));
      for (int a = 0; a < dim; ++a) lsn >> len[a];
    }
    const Grid g(dim, n, len);
    const int comps = std::stoi(expect_key(is, "components"));
    expect_key(is, "data");
    for (int c = 0; c < comps; ++c) {
      std::vector<double> values(g.size());
      for (auto& v : values) {
        if (!std::getline(is, line)) throw std::runtime_error("snapshot: truncated data block");
        v = std::stod(line);
      }
      rec.components.emplace_back(g, std::move(values));
    }
    expect_key(is, "end");
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<SnapshotRecord> read_snapshot_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("snapshot: cannot open " + path.string());
  return read_snapshots(is);
}

SnapshotRecord scalar_record(std::string name, double time, const ScalarField& f) {
  return {std::move(name), time, {f}};
}

SnapshotRecord vector_record(std::string name, double time, const VectorField& F) {
  SnapshotRecord r{std::move(name), time, {}};
  for (int i = 0; i < F.dim(); ++i) r.components.push_back(F[i]);
  return r;
}

VectorField as_vector(const SnapshotRecord& record) { return VectorField(record.components); }

}  // namespace qns
