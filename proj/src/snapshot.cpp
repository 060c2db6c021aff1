#include "resgas/snapshot.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "resgas/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

namespace resgas {

std::uint32_t crc32(const void* data, std::size_t len) {
    static const std::array<std::uint32_t, 256> table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) {
                c = (c & 1u) ? 0xedb88320u ^ (c >> 1) : (c >> 1);
            }
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xffffffffu;
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        crc = table[(crc ^ p[i]) & 0xffu] ^ (crc >> 8);
    }
    return crc ^ 0xffffffffu;
}

namespace {

constexpr char kMagic[6] = {'R', 'G', 'S', 'N', 'A', 'P'};
constexpr std::uint16_t kVersion = 1;

class Writer {
public:
    template <typename T>
    void put(T v) {
        const auto* p = reinterpret_cast<const char*>(&v);
        buf_.insert(buf_.end(), p, p + sizeof(T));
    }
    void put_bytes(const void* p, std::size_t len) {
        const auto* c = static_cast<const char*>(p);
        buf_.insert(buf_.end(), c, c + len);
    }
    void put_matrix(const Eigen::MatrixXd& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) put(m(r, c));
        }
    }
    void finish(const std::string& path) {
        const std::uint32_t crc = crc32(buf_.data(), buf_.size());
        put(crc);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("snapshot: cannot open for writing: " + path);
        out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
        if (!out) throw DataError("snapshot: write failed: " + path);
    }

private:
    std::vector<char> buf_;
};

class Reader {
public:
    explicit Reader(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw DataError("snapshot: cannot open: " + path);
        buf_.assign(std::istreambuf_iterator<char>(in), {});
        if (buf_.size() < sizeof(kMagic) + sizeof(std::uint16_t) + sizeof(std::uint32_t)) {
            throw DataError("snapshot: truncated file: " + path);
        }
        const std::uint32_t stored = peek_crc();
        const std::uint32_t computed =
            crc32(buf_.data(), buf_.size() - sizeof(std::uint32_t));
        if (stored != computed) throw DataError("snapshot: checksum failure: " + path);
        end_ = buf_.size() - sizeof(std::uint32_t);
    }

    template <typename T>
    T get() {
        if (pos_ + sizeof(T) > end_) throw DataError("snapshot: truncated payload");
        T v;
        std::memcpy(&v, buf_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    Eigen::MatrixXd get_matrix(Eigen::Index rows, Eigen::Index cols) {
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = get<double>();
        }
        return m;
    }
    bool exhausted() const { return pos_ == end_; }

private:
    std::uint32_t peek_crc() const {
        std::uint32_t v;
        std::memcpy(&v, buf_.data() + buf_.size() - sizeof(v), sizeof(v));
        return v;
    }
    std::vector<char> buf_;
    std::size_t pos_ = 0;
    std::size_t end_ = 0;
};

std::uint32_t variant_id(RngVariant v) {
    switch (v) {
        case RngVariant::RngIr: return 1;
        case RngVariant::RngJ: return 2;
        case RngVariant::MRngIr: return 3;
        case RngVariant::MRngJ: return 4;
        case RngVariant::MRngIrm: return 5;
        case RngVariant::MRngJm: return 6;
    }
    throw DataError("snapshot: unknown variant");
}

RngVariant variant_from_id(std::uint32_t id) {
    switch (id) {
        case 1: return RngVariant::RngIr;
        case 2: return RngVariant::RngJ;
        case 3: return RngVariant::MRngIr;
        case 4: return RngVariant::MRngJ;
        case 5: return RngVariant::MRngIrm;
        case 6: return RngVariant::MRngJm;
    }
    throw DataError("snapshot: unknown variant id");
}

void write_header(Writer& w, std::uint32_t variant, std::uint64_t n, std::uint64_t d) {
    w.put_bytes(kMagic, sizeof(kMagic));
    w.put(kVersion);
    w.put(variant);
    w.put(n);
    w.put(d);
}

struct Header {
    std::uint32_t variant;
    Eigen::Index n;
    Eigen::Index d;
};

Header read_header(Reader& r) {
    char magic[sizeof(kMagic)];
    for (char& c : magic) c = r.get<char>();
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw DataError("snapshot: bad magic tag");
    }
    const auto version = r.get<std::uint16_t>();
    if (version != kVersion) {
        throw DataError("snapshot: unsupported version " + std::to_string(version));
    }
    Header h;
    h.variant = r.get<std::uint32_t>();
    h.n = static_cast<Eigen::Index>(r.get<std::uint64_t>());
    h.d = static_cast<Eigen::Index>(r.get<std::uint64_t>());
    return h;
}

}  // namespace

void save_snapshot(const std::string& path, const EsnReservoir& reservoir) {
    Writer w;
    write_header(w, 0, static_cast<std::uint64_t>(reservoir.params().n),
                 static_cast<std::uint64_t>(reservoir.params().d));
    w.put<std::uint32_t>(4);
    w.put(reservoir.params().spectral_radius);
    w.put(reservoir.params().sparsity);
    w.put(reservoir.params().gamma);
    w.put(reservoir.params().input_scaling);
    for (Eigen::Index i = 0; i < reservoir.state().size(); ++i) w.put(reservoir.state()[i]);
    w.put_matrix(reservoir.w_in());
    w.put_matrix(reservoir.w_rec());
    w.finish(path);
}

void save_snapshot(const std::string& path, const RngReservoir& reservoir) {
    Writer w;
    write_header(w, variant_id(reservoir.variant()),
                 static_cast<std::uint64_t>(reservoir.n()),
                 static_cast<std::uint64_t>(reservoir.d()));
    w.put<std::uint32_t>(5);
    w.put(reservoir.params().alpha);
    w.put(reservoir.params().beta);
    w.put(reservoir.params().beta_masked);
    w.put(reservoir.params().gamma);
    w.put(reservoir.params().eta);
    for (Eigen::Index i = 0; i < reservoir.state().size(); ++i) w.put(reservoir.state()[i]);
    w.put_matrix(reservoir.w_in());
    w.put_matrix(reservoir.w_rec());
    for (const std::uint8_t m : reservoir.mask()) w.put(m);
    w.finish(path);
}

SnapshotKind snapshot_kind(const std::string& path) {
    Reader r(path);
    const Header h = read_header(r);
    return h.variant == 0 ? SnapshotKind::Esn : SnapshotKind::Rng;
}

EsnReservoir load_esn_snapshot(const std::string& path) {
    Reader r(path);
    const Header h = read_header(r);
    if (h.variant != 0) {
        throw DataError("snapshot: variant-id error: not an ESN snapshot");
    }
    const auto param_count = r.get<std::uint32_t>();
    if (param_count != 4) throw DataError("snapshot: bad ESN params block");
    EsnParams p;
    p.n = h.n;
    p.d = h.d;
    p.spectral_radius = r.get<double>();
    p.sparsity = r.get<double>();
    p.gamma = r.get<double>();
    p.input_scaling = r.get<double>();
    Eigen::VectorXd state(h.n);
    for (Eigen::Index i = 0; i < h.n; ++i) state[i] = r.get<double>();
    Eigen::MatrixXd w_in = r.get_matrix(h.n, h.d);
    Eigen::MatrixXd w_rec = r.get_matrix(h.n, h.n);
    if (!r.exhausted()) throw DataError("snapshot: trailing bytes");
    return EsnReservoir::from_parts(p, std::move(w_in), std::move(w_rec), std::move(state));
}

RngReservoir load_rng_snapshot(const std::string& path) {
    Reader r(path);
    const Header h = read_header(r);
    if (h.variant == 0) {
        throw DataError("snapshot: variant-id error: not an RNG snapshot");
    }
    const RngVariant variant = variant_from_id(h.variant);
    const auto param_count = r.get<std::uint32_t>();
    if (param_count != 5) throw DataError("snapshot: bad RNG params block");
    RngParams p;
    p.alpha = r.get<double>();
    p.beta = r.get<double>();
    p.beta_masked = r.get<double>();
    p.gamma = r.get<double>();
    p.eta = r.get<double>();
    Eigen::VectorXd state(h.n);
    for (Eigen::Index i = 0; i < h.n; ++i) state[i] = r.get<double>();
    Eigen::MatrixXd w_in = r.get_matrix(h.n, h.d);
    Eigen::MatrixXd w_rec = r.get_matrix(h.n, h.n);
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(h.n));
    for (auto& m : mask) m = r.get<std::uint8_t>();
    if (!r.exhausted()) throw DataError("snapshot: trailing bytes");
    return RngReservoir::from_parts(p, variant, std::move(w_in), std::move(w_rec),
                                    std::move(mask), std::move(state));
}

}  // namespace resgas
