#include "radns/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <iterator>

#include "radns/config.hpp"

namespace radns {

namespace {

constexpr char kCheckpointMagic[16] = {'R', 'A', 'D', 'N', 'S', '-', 'C', 'H',
                                       'E', 'C', 'K', 'P', 'O', 'I', 'N', 'T'};
constexpr char kSnapshotMagic[16] = {'R', 'A', 'D', 'N', 'S', '-', 'S', 'N',
                                     'A', 'P', 'S', 'H', 'O', 'T', 'S', '\0'};
constexpr std::uint32_t kSnapshotVersion = 1;

class ByteWriter {
 public:
  void raw(const char* data, std::size_t n) { buf_.append(data, n); }
  void u32(std::uint32_t x) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t x) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
  }
  void f64(double x) { u64(std::bit_cast<std::uint64_t>(x)); }
  void field(const Field& f) {
    for (double x : f) f64(x);
  }
  const std::string& bytes() const { return buf_; }

 private:
  std::string buf_;
};

class ByteReader {
 public:
  ByteReader(const std::string& data, std::string what) : data_(data), what_(std::move(what)) {}
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw CheckpointError(what_ + " is truncated");
  }
  std::string raw(std::size_t n) {
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t x = 0;
    for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return x;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return x;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  Field field(std::size_t n) {
    need(n * 8);
    Field f(n);
    for (double& x : f) x = f64();
    return f;
  }
  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ == data_.size(); }

 private:
  const std::string& data_;
  std::string what_;
  std::size_t pos_ = 0;
};

std::string read_all(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError(std::string("cannot open ") + what + " " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

constexpr std::uint64_t kMaxCells = std::uint64_t{1} << 32;

}  // namespace

void checkpoint_save(const Checkpoint& c, const std::filesystem::path& path) {
  const std::size_t n = c.state.size();
  if (c.state.u.size() != n || c.state.theta.size() != n || c.state.q.size() != n) {
    throw std::invalid_argument("checkpoint state fields differ in length");
  }
  ByteWriter w;
  w.raw(kCheckpointMagic, sizeof kCheckpointMagic);
  w.u32(kCheckpointVersion);
  w.u64(n);
  w.f64(c.state.t);
  w.field(c.state.v);
  w.field(c.state.u);
  w.field(c.state.theta);
  w.field(c.state.q);
  w.u64(c.config_hash);
  w.u64(c.step_index);
  w.u64(c.snapshot_count);
  w.u64(c.rejected_steps);
  w.u64(c.csv_bytes);
  w.u64(c.snapshot_bytes);
  w.u64(c.auditor.size());
  w.field(c.auditor);
  const std::uint64_t sum = fnv1a(w.bytes().data(), w.bytes().size());
  w.u64(sum);

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot write checkpoint " + tmp.string());
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    if (!out) throw CheckpointError("failed writing checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void checkpoint_save(const State& state, const std::filesystem::path& path,
                     std::uint64_t config_hash) {
  Checkpoint c;
  c.state = state;
  c.config_hash = config_hash;
  checkpoint_save(c, path);
}

Checkpoint checkpoint_load(const std::filesystem::path& path) {
  const std::string data = read_all(path, "checkpoint");
  ByteReader r(data, "checkpoint " + path.string());
  if (r.raw(16) != std::string(kCheckpointMagic, 16)) {
    throw CheckpointError("not a checkpoint file: " + path.string());
  }
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw CheckpointError("checkpoint format version " + std::to_string(version) +
                          " is not supported (expected " + std::to_string(kCheckpointVersion) + ")");
  }
  const std::uint64_t n = r.u64();
  if (n == 0 || n > kMaxCells) throw CheckpointError("checkpoint has a corrupt cell count");
  Checkpoint c;
  c.state.t = r.f64();
  c.state.v = r.field(n);
  c.state.u = r.field(n);
  c.state.theta = r.field(n);
  c.state.q = r.field(n);
  c.config_hash = r.u64();
  c.step_index = r.u64();
  c.snapshot_count = r.u64();
  c.rejected_steps = r.u64();
  c.csv_bytes = r.u64();
  c.snapshot_bytes = r.u64();
  const std::uint64_t k = r.u64();
  if (k > data.size() / 8) throw CheckpointError("checkpoint has a corrupt auditor length");
  c.auditor = r.field(k);
  const std::size_t body = r.pos();
  const std::uint64_t stored = r.u64();
  if (!r.done()) throw CheckpointError("checkpoint has trailing bytes");
  if (fnv1a(data.data(), body) != stored) throw CheckpointError("checkpoint checksum mismatch");
  return c;
}

Checkpoint checkpoint_load(const std::filesystem::path& path, std::uint64_t expected_hash) {
  Checkpoint c = checkpoint_load(path);
  if (c.config_hash != expected_hash) {
    throw CheckpointError("checkpoint was written under a different configuration (hash mismatch)");
  }
  return c;
}

SnapshotWriter::SnapshotWriter(const std::filesystem::path& path, std::size_t n_cells,
                               std::uint64_t keep_bytes)
    : n_(n_cells) {
  if (keep_bytes > 0) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (ec || size < keep_bytes) {
      throw CheckpointError("snapshot file " + path.string() + " is shorter than the checkpoint expects");
    }
    std::filesystem::resize_file(path, keep_bytes);
    out_.open(path, std::ios::binary | std::ios::app);
    bytes_ = keep_bytes;
  } else {
    out_.open(path, std::ios::binary | std::ios::trunc);
    ByteWriter w;
    w.raw(kSnapshotMagic, sizeof kSnapshotMagic);
    w.u32(kSnapshotVersion);
    w.u64(n_cells);
    out_.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    bytes_ = w.bytes().size();
  }
  if (!out_) throw CheckpointError("cannot write snapshot file " + path.string());
}

void SnapshotWriter::write(const Snapshot& snapshot) {
  ByteWriter w;
  w.f64(snapshot.state.t);
  w.u64(snapshot.step_index);
  for (const Field* f : {&snapshot.state.v, &snapshot.state.u, &snapshot.state.theta,
                         &snapshot.state.q, &snapshot.theta_t}) {
    if (f->size() != n_) throw std::invalid_argument("snapshot field has the wrong length");
    w.field(*f);
  }
  out_.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  out_.flush();
  if (!out_) throw CheckpointError("failed writing snapshot");
  bytes_ += w.bytes().size();
}

std::vector<Snapshot> read_snapshots(const std::filesystem::path& path) {
  const std::string data = read_all(path, "snapshot file");
  ByteReader r(data, "snapshot file " + path.string());
  if (r.raw(16) != std::string(kSnapshotMagic, 16)) {
    throw CheckpointError("not a snapshot file: " + path.string());
  }
  if (r.u32() != kSnapshotVersion) throw CheckpointError("unsupported snapshot file version");
  const std::uint64_t n = r.u64();
  if (n == 0 || n > kMaxCells) throw CheckpointError("snapshot file has a corrupt cell count");
  std::vector<Snapshot> out;
  while (!r.done()) {
    Snapshot s;
    s.state.t = r.f64();
    s.step_index = r.u64();
    s.state.v = r.field(n);
    s.state.u = r.field(n);
    s.state.theta = r.field(n);
    s.state.q = r.field(n);
    s.theta_t = r.field(n);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace radns
