#include "wsbm/io.hpp"

#include <cstring>
#include <fstream>
#include <limits>

namespace wsbm {

namespace {

constexpr char kMagic[4] = {'W', 'S', 'B', 'M'};
constexpr std::uint16_t kVersion = 1;

static_assert(std::numeric_limits<double>::is_iec559,
              "graph container assumes IEEE-754 doubles");

void put_u16(std::ostream& os, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xff),
                     static_cast<char>((v >> 8) & 0xff)};
  os.write(b, 2);
}

void put_u32(std::ostream& os, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 4);
}

void put_f64(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  char b[8];
  for (int i = 0; i < 8; ++i)
    b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  os.write(b, 8);
}

std::uint16_t get_u16(std::istream& is) {
  unsigned char b[2];
  is.read(reinterpret_cast<char*>(b), 2);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void to_json(nlohmann::json& j, const LabelDistribution& d) {
  if (d.is_discrete())
    j = {{"kind", "discrete"}, {"probs", d.probs()}};
  else
    j = {{"kind", "gaussian"}, {"mean", d.mean()}, {"variance", d.variance()}};
}

void from_json(const nlohmann::json& j, LabelDistribution& d) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "discrete")
    d = LabelDistribution::discrete(j.at("probs").get<std::vector<double>>());
  else if (kind == "gaussian")
    d = LabelDistribution::gaussian(j.at("mean").get<double>(),
                                    j.at("variance").get<double>());
  else
    throw validation_error("unknown distribution kind '" + kind + "'");
}

void to_json(nlohmann::json& j, const ModelSpec& spec) {
  j = {{"K", spec.K},
       {"n", spec.n},
       {"within", spec.within},
       {"between", spec.between}};
}

void from_json(const nlohmann::json& j, ModelSpec& spec) {
  spec.K = j.at("K").get<int>();
  spec.n = j.at("n").get<long>();
  from_json(j.at("within"), spec.within);  // explicit: no default ctor
  from_json(j.at("between"), spec.between);
  if (j.contains("node_cap")) spec.node_cap = j.at("node_cap").get<long>();
  spec.validate();
}

void save_graph(const std::string& path, const WeightedGraph& g,
                const ModelSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (g.size() != spec.total_nodes())
    throw validation_error("graph size does not match spec");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os.write(kMagic, 4);
  put_u16(os, kVersion);
  put_u32(os, static_cast<std::uint32_t>(g.size()));
  put_u16(os, static_cast<std::uint16_t>(spec.K));
  os.put(g.kind() == DistKind::discrete ? '\0' : '\1');
  if (g.kind() == DistKind::discrete) {
    for (std::uint16_t v : g.labels_flat()) put_u16(os, v);
  } else {
    for (double v : g.weights_flat()) put_f64(os, v);
  }
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
  os.close();

  nlohmann::json side = {{"spec", spec}, {"seed", seed}};
  std::ofstream js(path + ".json", std::ios::trunc);
  if (!js)
    throw std::runtime_error("cannot open '" + path + ".json' for writing");
  js << side.dump(2) << "\n";
  if (!js) throw std::runtime_error("write to '" + path + ".json' failed");
}

LoadedGraph load_graph(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw validation_error("cannot open '" + path + "'");
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw validation_error("'" + path + "' is not a graph container");
  const std::uint16_t version = get_u16(is);
  if (version != kVersion)
    throw validation_error("unsupported container version " +
                           std::to_string(version));
  const std::uint32_t N = get_u32(is);
  const std::uint16_t K = get_u16(is);
  const int kind_byte = is.get();
  if (!is || (kind_byte != 0 && kind_byte != 1))
    throw validation_error("'" + path + "' has a corrupt header");

  std::ifstream js(path + ".json");
  if (!js) throw validation_error("missing sidecar '" + path + ".json'");
  nlohmann::json side;
  try {
    js >> side;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error("bad sidecar '" + path + ".json': " + e.what());
  }
  ModelSpec spec = side.at("spec").get<ModelSpec>();
  const std::uint64_t seed = side.at("seed").get<std::uint64_t>();

  if (spec.total_nodes() != static_cast<long>(N) || spec.K != K)
    throw validation_error("sidecar spec disagrees with container header");
  if ((spec.within.kind() == DistKind::discrete) != (kind_byte == 0))
    throw validation_error("sidecar kind disagrees with container header");

  LoadedGraph out{
      WeightedGraph(
          kind_byte == 0 ? DistKind::discrete : DistKind::gaussian,
          static_cast<long>(N),
          kind_byte == 0 ? static_cast<int>(spec.within.support_size()) : 0),
      std::move(spec), seed};
  if (kind_byte == 0) {
    for (auto& v : out.graph.labels_flat()) {
      v = get_u16(is);
      if (v >= out.graph.num_labels())
        throw validation_error("label value out of range in '" + path + "'");
    }
  } else {
    for (auto& v : out.graph.weights_flat()) v = get_f64(is);
  }
  if (!is) throw validation_error("'" + path + "' is truncated");
  is.get();
  if (!is.eof())
    throw validation_error("'" + path + "' has trailing bytes");
  return out;
}

}  // namespace wsbm
