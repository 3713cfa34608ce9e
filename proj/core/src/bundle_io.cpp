#include "rpsgmm/bundle_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rpsgmm/csv.hpp"
#include "rpsgmm/errors.hpp"

namespace rpsgmm {

namespace {

constexpr int kFormatVersion = 1;
constexpr const char* kMagic = "rpsgmm-bundle";

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hexfloat(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double parse_hexfloat(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) {
    throw IntegrityError("bundle: bad numeric field '" + s + "'");
  }
  return v;
}

class LineReader {
 public:
  explicit LineReader(const std::string& text) : in_(text) {}

  std::string next() {
    std::string line;
    while (std::getline(in_, line)) {
      if (!line.empty()) return line;
    }
    throw IntegrityError("bundle: unexpected end of file");
  }

 private:
  std::istringstream in_;
};

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::string serialize_bundle(const ClassifierBundle& bundle) {
  bundle.validate();
  std::ostringstream body;
  body << "tau " << bundle.params.tau << "\n";
  body << "dim " << bundle.params.dim << "\n";
  body << "channels " << bundle.channel_schema.size();
  for (const auto& c : bundle.channel_schema) body << ' ' << c;
  body << "\n";
  body << "classes " << bundle.class_order.size() << "\n";
  for (const auto& label : bundle.class_order) {
    const GmmModel& m = bundle.models.at(label);
    const int M = m.components();
    const int dim = m.dim();
    body << "class " << label << "\n";
    body << "components " << M << "\n";
    body << "point_dim " << dim << "\n";
    body << "meta " << hexfloat(m.meta.final_log_likelihood) << ' '
         << m.meta.iterations << ' ' << m.meta.seed << ' '
         << hexfloat(m.meta.regularization) << "\n";
    body << "weights";
    for (int j = 0; j < M; ++j) body << ' ' << hexfloat(m.weights(j));
    body << "\n";
    for (int j = 0; j < M; ++j) {
      body << "mean";
      for (int i = 0; i < dim; ++i) body << ' ' << hexfloat(m.means[j](i));
      body << "\n";
      for (int r = 0; r < dim; ++r) {
        body << "cov";
        for (int c = 0; c < dim; ++c) {
          body << ' ' << hexfloat(m.covariances[j](r, c));
        }
        body << "\n";
      }
    }
  }

  std::ostringstream out;
  out << kMagic << " v" << kFormatVersion << "\n";
  char checksum[32];
  std::snprintf(checksum, sizeof(checksum), "%016" PRIx64,
                fnv1a(body.str()));
  out << "checksum " << checksum << "\n";
  out << body.str();
  return out.str();
}

ClassifierBundle deserialize_bundle(const std::string& text) {
  std::size_t eol = text.find('\n');
  if (eol == std::string::npos) throw IntegrityError("bundle: truncated file");
  {
    const auto header = tokens(text.substr(0, eol));
    if (header.size() != 2 || header[0] != kMagic) {
      throw IncompatibilityError("bundle: not a bundle file");
    }
    if (header[1] != "v" + std::to_string(kFormatVersion)) {
      throw IncompatibilityError("bundle: unsupported format version '" +
                                 header[1] + "'");
    }
  }
  std::size_t eol2 = text.find('\n', eol + 1);
  if (eol2 == std::string::npos) {
    throw IntegrityError("bundle: truncated file");
  }
  {
    const auto line = tokens(text.substr(eol + 1, eol2 - eol - 1));
    if (line.size() != 2 || line[0] != "checksum") {
      throw IntegrityError("bundle: missing checksum");
    }
    const std::string body = text.substr(eol2 + 1);
    char expected[32];
    std::snprintf(expected, sizeof(expected), "%016" PRIx64, fnv1a(body));
    if (line[1] != expected) {
      throw IntegrityError("bundle: checksum mismatch, file is corrupt");
    }
  }

  LineReader reader(text.substr(eol2 + 1));
  ClassifierBundle bundle;

  auto expect = [&](const char* key) {
    auto toks = tokens(reader.next());
    if (toks.empty() || toks[0] != key) {
      throw IntegrityError("bundle: expected '" + std::string(key) + "'");
    }
    return toks;
  };

  bundle.params.tau = std::stoi(expect("tau").at(1));
  bundle.params.dim = std::stoi(expect("dim").at(1));
  {
    auto toks = expect("channels");
    const int n = std::stoi(toks.at(1));
    for (int i = 0; i < n; ++i) {
      bundle.channel_schema.push_back(toks.at(2 + static_cast<std::size_t>(i)));
    }
  }
  const int n_classes = std::stoi(expect("classes").at(1));
  for (int k = 0; k < n_classes; ++k) {
    const std::string label = expect("class").at(1);
    GmmModel m;
    const int M = std::stoi(expect("components").at(1));
    const int dim = std::stoi(expect("point_dim").at(1));
    {
      auto toks = expect("meta");
      m.meta.final_log_likelihood = parse_hexfloat(toks.at(1));
      m.meta.iterations = std::stoi(toks.at(2));
      m.meta.seed = std::stoull(toks.at(3));
      m.meta.regularization = parse_hexfloat(toks.at(4));
    }
    {
      auto toks = expect("weights");
      m.weights.resize(M);
      for (int j = 0; j < M; ++j) {
        m.weights(j) = parse_hexfloat(toks.at(1 + static_cast<std::size_t>(j)));
      }
    }
    m.means.resize(M);
    m.covariances.resize(M);
    for (int j = 0; j < M; ++j) {
      auto mean_toks = expect("mean");
      m.means[j].resize(dim);
      for (int i = 0; i < dim; ++i) {
        m.means[j](i) =
            parse_hexfloat(mean_toks.at(1 + static_cast<std::size_t>(i)));
      }
      m.covariances[j].resize(dim, dim);
      for (int r = 0; r < dim; ++r) {
        auto cov_toks = expect("cov");
        for (int c = 0; c < dim; ++c) {
          m.covariances[j](r, c) =
              parse_hexfloat(cov_toks.at(1 + static_cast<std::size_t>(c)));
        }
      }
    }
    bundle.class_order.push_back(label);
    bundle.models[label] = std::move(m);
  }
  bundle.validate();
  return bundle;
}

void save_bundle(const ClassifierBundle& bundle,
                 const std::filesystem::path& path) {
  write_file_atomic(path, serialize_bundle(bundle));
}

ClassifierBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_bundle(buf.str());
}

}  // namespace rpsgmm
