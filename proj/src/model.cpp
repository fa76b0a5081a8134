#include "wscnn/model.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wscnn::model {

void ModelConfig::validate() const {
    if (vocab <= 0 || embed_dim <= 0 || maxlen <= 0 || filters <= 0 || kernel <= 0 ||
        hidden <= 0)
        throw std::invalid_argument("model config fields must be positive");
    if (classes != 3) throw std::invalid_argument("model is a 3-class classifier");
    if (kernel > maxlen) throw std::invalid_argument("kernel size exceeds sequence length");
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
        throw std::invalid_argument("dropout rate must be in [0, 1)");
}

void check_ids(const std::vector<int>& ids, int batch, const ModelConfig& cfg) {
    if (ids.size() != static_cast<std::size_t>(batch) * cfg.maxlen)
        throw std::invalid_argument("id batch does not match batch * maxlen");
    for (int id : ids)
        if (id < 0 || id >= cfg.vocab) throw std::out_of_range("sequence id out of range");
}

namespace {

void glorot_fill(nn::Tensor& t, int fan_in, int fan_out, Rng& rng) {
    float limit = std::sqrt(6.0f / static_cast<float>(fan_in + fan_out));
    for (float& v : t.data) v = rng.uniform(-limit, limit);
}

}  // namespace

Model build_model(const ModelConfig& config, std::uint64_t seed) {
    config.validate();
    Model m;
    m.config = config;
    const int V = config.vocab, D = config.embed_dim, F = config.filters;
    const int K = config.kernel, H = config.hidden, C = config.classes;
    m.embedding = nn::Tensor({V, D});
    m.conv_w = nn::Tensor({K, D, F});
    m.conv_b = nn::Tensor({F});
    m.dense_w = nn::Tensor({F, H});
    m.dense_b = nn::Tensor({H});
    m.out_w = nn::Tensor({H, C});
    m.out_b = nn::Tensor({C});

    Rng rng(seed);
    for (float& v : m.embedding.data) v = rng.uniform(-0.05f, 0.05f);
    for (int d = 0; d < D; ++d) m.embedding.data[d] = 0.0f;  // padding row
    glorot_fill(m.conv_w, K * D, K * F, rng);
    glorot_fill(m.dense_w, F, H, rng);
    glorot_fill(m.out_w, H, C, rng);
    return m;
}

ParamCounts param_count(const ModelConfig& c) {
    ParamCounts p;
    p.embedding = static_cast<std::size_t>(c.vocab) * c.embed_dim;
    p.conv = static_cast<std::size_t>(c.kernel) * c.embed_dim * c.filters + c.filters;
    p.dense = static_cast<std::size_t>(c.filters) * c.hidden + c.hidden;
    p.output = static_cast<std::size_t>(c.hidden) * c.classes + c.classes;
    p.total = p.embedding + p.conv + p.dense + p.output;
    return p;
}

std::vector<labeler::TriLabel> argmax_labels(const nn::Tensor& probs) {
    const int B = probs.shape[0], C = probs.shape[1];
    std::vector<labeler::TriLabel> out;
    out.reserve(B);
    for (int i = 0; i < B; ++i) {
        const float* row = &probs.data[static_cast<std::size_t>(i) * C];
        int best = 0;
        for (int j = 1; j < C; ++j)
            if (row[j] > row[best]) best = j;
        out.push_back(labeler::trilabel_from_int(best - 1));
    }
    return out;
}

std::vector<labeler::TriLabel> predict(const Model& m, const std::vector<int>& ids, int batch) {
    return argmax_labels(forward(m, ids, batch));
}

namespace {

constexpr char kMagic[5] = {'W', 'S', 'C', 'N', 'N'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
void write_le(std::string& out, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
        out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFF));
}

template <typename T>
T read_le(const std::string& buf, std::size_t& pos) {
    if (pos + sizeof(T) > buf.size()) throw std::runtime_error("truncated model file");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
    pos += sizeof(T);
    return static_cast<T>(v);
}

}  // namespace

void save_model(const Model& m, const std::string& path) {
    std::ostringstream header;
    const ModelConfig& c = m.config;
    header << "vocab=" << c.vocab << "\nembed_dim=" << c.embed_dim
           << "\nmaxlen=" << c.maxlen << "\nfilters=" << c.filters
           << "\nkernel=" << c.kernel << "\nhidden=" << c.hidden
           << "\nclasses=" << c.classes << "\ndropout=" << c.dropout_rate << "\n";
    std::size_t offset = 0;
    auto params = m.params();
    for (std::size_t i = 0; i < params.size(); ++i) {
        header << "tensor " << Model::param_name(i);
        for (int d : params[i]->shape) header << ' ' << d;
        header << " @" << offset << "\n";
        offset += params[i]->size();
    }
    std::string htext = header.str();

    std::string buf;
    buf.append(kMagic, sizeof kMagic);
    write_le(buf, kVersion);
    write_le(buf, static_cast<std::uint32_t>(htext.size()));
    buf += htext;
    for (const auto* p : params) {
        for (float v : p->data) {
            std::uint32_t bits;
            std::memcpy(&bits, &v, 4);
            write_le(buf, bits);
        }
    }
    std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0, reinterpret_cast<const Bytef*>(buf.data()), static_cast<uInt>(buf.size())));
    write_le(buf, crc);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

Model load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string buf = std::move(ss).str();
    if (buf.size() < sizeof kMagic + 2 + 4 + 4) throw std::runtime_error("truncated model file");
    if (std::memcmp(buf.data(), kMagic, sizeof kMagic) != 0)
        throw std::runtime_error("not a model file (bad magic): " + path);

    std::uint32_t stored_crc;
    {
        std::size_t p = buf.size() - 4;
        stored_crc = read_le<std::uint32_t>(buf, p);
    }
    std::uint32_t actual_crc = static_cast<std::uint32_t>(crc32(
        0, reinterpret_cast<const Bytef*>(buf.data()), static_cast<uInt>(buf.size() - 4)));
    if (stored_crc != actual_crc) throw std::runtime_error("model file checksum mismatch: " + path);

    std::size_t pos = sizeof kMagic;
    std::uint16_t version = read_le<std::uint16_t>(buf, pos);
    if (version != kVersion)
        throw std::runtime_error("unsupported model file version " + std::to_string(version));
    std::uint32_t hlen = read_le<std::uint32_t>(buf, pos);
    if (pos + hlen > buf.size()) throw std::runtime_error("truncated model file");
    std::istringstream header(buf.substr(pos, hlen));
    pos += hlen;

    Model m;
    struct Manifest {
        std::string name;
        std::vector<int> shape;
        std::size_t offset;
    };
    std::vector<Manifest> manifest;
    std::string line;
    while (std::getline(header, line)) {
        if (line.rfind("tensor ", 0) == 0) {
            std::istringstream ls(line.substr(7));
            Manifest mf;
            ls >> mf.name;
            std::string tok;
            while (ls >> tok) {
                if (tok[0] == '@')
                    mf.offset = std::stoul(tok.substr(1));
                else
                    mf.shape.push_back(std::stoi(tok));
            }
            manifest.push_back(std::move(mf));
        } else {
            std::size_t eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(0, eq);
            std::string val = line.substr(eq + 1);
            if (key == "vocab") m.config.vocab = std::stoi(val);
            else if (key == "embed_dim") m.config.embed_dim = std::stoi(val);
            else if (key == "maxlen") m.config.maxlen = std::stoi(val);
            else if (key == "filters") m.config.filters = std::stoi(val);
            else if (key == "kernel") m.config.kernel = std::stoi(val);
            else if (key == "hidden") m.config.hidden = std::stoi(val);
            else if (key == "classes") m.config.classes = std::stoi(val);
            else if (key == "dropout") m.config.dropout_rate = std::stod(val);
        }
    }
    m.config.validate();

    auto params = m.params();
    if (manifest.size() != params.size())
        throw std::runtime_error("model file manifest does not list all tensors");
    const std::size_t data_start = pos;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (manifest[i].name != Model::param_name(i))
            throw std::runtime_error("unexpected tensor in model file: " + manifest[i].name);
        nn::Tensor t(manifest[i].shape);
        std::size_t p = data_start + manifest[i].offset * 4;
        for (float& v : t.data) {
            std::uint32_t bits = read_le<std::uint32_t>(buf, p);
            std::memcpy(&v, &bits, 4);
        }
        *params[i] = std::move(t);
    }
    return m;
}

}  // namespace wscnn::model
