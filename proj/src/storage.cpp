#include "levelbdd/storage.hpp"

#include <array>
#include <atomic>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <mutex>
#include <ostream>
#include <string>
#include <unistd.h>

namespace levelbdd {

namespace {
std::mutex g_config_mutex;
StorageConfig g_config;
std::atomic<std::uint64_t> g_runs{0};
std::atomic<std::uint64_t> g_bytes{0};
std::atomic<std::uint64_t> g_file_seq{0};
} // namespace

StorageConfig storage_config() {
  std::lock_guard lock(g_config_mutex);
  return g_config;
}

void set_storage_config(const StorageConfig &cfg) {
  std::lock_guard lock(g_config_mutex);
  g_config = cfg;
}

SorterCounters sorter_counters() { return {g_runs.load(), g_bytes.load()}; }

namespace detail {

void note_spill(std::uint64_t bytes) {
  ++g_runs;
  g_bytes += bytes;
}

std::filesystem::path temp_dir() {
  auto cfg = storage_config();
  if (!cfg.temp_dir.empty())
    return cfg.temp_dir;
  if (const char *env = std::getenv("LEVELBDD_TMPDIR"); env && *env)
    return env;
  return std::filesystem::temp_directory_path();
}

RunFile::RunFile(std::size_t block_size) {
  _path = temp_dir() / ("levelbdd-" + std::to_string(::getpid()) + "-" +
                        std::to_string(g_file_seq++) + ".run");
  _file = std::fopen(_path.c_str(), "w+b");
  if (!_file)
    throw EngineError("cannot create temporary file " + _path.string());
  std::setvbuf(_file, nullptr, _IOFBF, block_size);
}

RunFile::~RunFile() {
  if (_file)
    std::fclose(_file);
  std::error_code ec;
  std::filesystem::remove(_path, ec);
}

void RunFile::write(const void *data, std::size_t bytes) {
  if (bytes > 0 && std::fwrite(data, 1, bytes, _file) != bytes)
    throw EngineError("write to temporary file failed");
}

void RunFile::rewind() {
  if (std::fflush(_file) != 0 || std::fseek(_file, 0, SEEK_SET) != 0)
    throw EngineError("seek in temporary file failed");
}

std::size_t RunFile::read(void *data, std::size_t bytes) {
  std::size_t got = std::fread(data, 1, bytes, _file);
  if (got < bytes && std::ferror(_file))
    throw EngineError("read from temporary file failed");
  return got;
}

} // namespace detail

std::uint64_t ArcFile::node_count() const noexcept {
  std::uint64_t n = 0;
  for (const LevelInfo &l : levels)
    n += l.count;
  return n;
}

ArcFile transpose(const Bdd &f) {
  if (f.is_const())
    throw EngineError("transpose of a constant Bdd");
  Sorter<ArcRec, ByTarget> internal;
  ArcFile out;
  for (const NodeRec &n : f.nodes()) {
    for (bool hi : {false, true}) {
      ArcRec arc{n.uid, hi, hi ? n.high : n.low};
      if (arc.target.is_terminal())
        out.terminal.push_back(arc); // already in source order
      else
        internal.push(arc);
    }
  }
  out.internal = internal.drain();
  out.levels = f.levels();
  out.root = f.root();
  return out;
}

std::vector<NodeRec> untranspose(const ArcFile &a) {
  Sorter<ArcRec, BySource> sorter;
  for (const ArcRec &arc : a.internal)
    sorter.push(arc);
  for (const ArcRec &arc : a.terminal)
    sorter.push(arc);
  sorter.finalize();
  std::vector<NodeRec> nodes;
  nodes.reserve(a.arc_count() / 2);
  while (sorter.can_pull()) {
    ArcRec low = sorter.pull();
    if (low.is_high || !sorter.can_pull())
      throw EngineError("node " + to_string(low.source) + " lacks a low arc");
    ArcRec high = sorter.pull();
    if (high.source != low.source || !high.is_high)
      throw EngineError("node " + to_string(low.source) + " lacks a high arc");
    if (sorter.can_pull() && sorter.peek().source == low.source)
      throw EngineError("node " + to_string(low.source) + " has more than two arcs");
    nodes.push_back({low.source, low.target, high.target});
  }
  return nodes;
}

const NodeRec &NodeReader::seek(Uid u) {
  assert(!_started || _last <= u);
  _started = true;
  _last = u;
  while (_pos < _nodes.size() && _nodes[_pos].uid < u) {
    ++_pos;
  }
  if (_pos == _nodes.size() || _nodes[_pos].uid != u)
    throw EngineError("node " + to_string(u) + " not found in stream");
  ++_reads;
  return _nodes[_pos];
}

namespace {

constexpr std::array<char, 8> kNodeMagic = {'L', 'B', 'D', 'D', 'N', 'O', 'D', 'E'};
constexpr std::array<char, 8> kArcMagic = {'L', 'B', 'D', 'D', 'A', 'R', 'C', 'S'};
constexpr std::uint64_t kHighFlag = std::uint64_t{1} << 63;

void put_word(std::ostream &os, std::uint64_t w) {
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i)
    bytes[i] = static_cast<char>((w >> (8 * i)) & 0xff);
  os.write(bytes.data(), 8);
}

std::uint64_t get_word(std::istream &is) {
  std::array<unsigned char, 8> bytes;
  if (!is.read(reinterpret_cast<char *>(bytes.data()), 8))
    throw EngineError("truncated file");
  std::uint64_t w = 0;
  for (int i = 7; i >= 0; --i)
    w = (w << 8) | bytes[i];
  return w;
}

void expect_magic(std::istream &is, const std::array<char, 8> &magic) {
  std::array<char, 8> got;
  if (!is.read(got.data(), 8) || got != magic)
    throw EngineError("bad file magic");
}

} // namespace

void write_node_file(std::ostream &os, const Bdd &f) {
  os.write(kNodeMagic.data(), 8);
  put_word(os, f.nodes().size());
  put_word(os, f.root().raw());
  for (const NodeRec &n : f.nodes()) {
    put_word(os, n.uid.raw());
    put_word(os, n.low.raw());
    put_word(os, n.high.raw());
  }
}

Bdd read_node_file(std::istream &is) {
  expect_magic(is, kNodeMagic);
  std::uint64_t count = get_word(is);
  Uid root = Uid::from_raw(get_word(is));
  std::vector<NodeRec> nodes;
  nodes.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Uid u = Uid::from_raw(get_word(is));
    Uid lo = Uid::from_raw(get_word(is));
    Uid hi = Uid::from_raw(get_word(is));
    nodes.push_back({u, lo, hi});
  }
  return Bdd(std::move(nodes), root);
}

void write_arc_file(std::ostream &os, const ArcFile &a) {
  os.write(kArcMagic.data(), 8);
  put_word(os, a.internal.size());
  put_word(os, a.terminal.size());
  put_word(os, a.root.raw());
  for (const auto *section : {&a.internal, &a.terminal}) {
    for (const ArcRec &arc : *section) {
      put_word(os, arc.source.raw() | (arc.is_high ? kHighFlag : 0));
      put_word(os, arc.target.raw());
    }
  }
}

ArcFile read_arc_file(std::istream &is) {
  expect_magic(is, kArcMagic);
  ArcFile a;
  std::uint64_t n_internal = get_word(is);
  std::uint64_t n_terminal = get_word(is);
  a.root = Uid::from_raw(get_word(is));
  auto read_section = [&](std::vector<ArcRec> &out, std::uint64_t n) {
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      std::uint64_t src = get_word(is);
      Uid tgt = Uid::from_raw(get_word(is));
      out.push_back({Uid::from_raw(src), (src & kHighFlag) != 0, tgt});
    }
  };
  read_section(a.internal, n_internal);
  read_section(a.terminal, n_terminal);
  // Level metadata follows from the sources: every source has two arcs.
  std::vector<NodeRec> nodes = untranspose(a);
  a.levels = levels_of(nodes);
  return a;
}

} // namespace levelbdd
