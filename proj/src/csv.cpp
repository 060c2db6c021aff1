#include "resgas/csv.hpp"

#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

#include "resgas/errors.hpp"
#include "resgas/snapshot.hpp"

namespace resgas {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Trim to the shortest representation that still round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char probe[32];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        double back;
        std::sscanf(probe, "%lf", &back);
        if (back == v) return probe;
    }
    return buf;
}

namespace {

std::string timestamp_line() {
    const std::time_t now = std::time(nullptr);
    char buf[64];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return std::string("# generated: ") + buf + "\n";
}

}  // namespace

std::string results_csv(const std::vector<SweepRow>& rows, bool timestamp) {
    std::ostringstream os;
    if (timestamp) os << timestamp_line();
    os << "dataset,variant,n,t_h,lambda_i,lambda_f,seed_count,nrmse_mean,"
          "nrmse_var,best_grid_point\n";
    for (const SweepRow& r : rows) {
        os << r.dataset << ',' << r.variant << ',' << r.n << ',' << r.t_h << ','
           << format_double(r.lambda_i) << ',' << format_double(r.lambda_f) << ','
           << r.seed_count << ',' << format_double(r.nrmse_mean) << ','
           << format_double(r.nrmse_var) << ',' << r.best_grid_point << '\n';
    }
    return os.str();
}

std::string ring_demo_csv(const std::vector<RingDemoRow>& rows, bool timestamp) {
    std::ostringstream os;
    if (timestamp) os << timestamp_line();
    os << "iteration,coverage,energy\n";
    for (const RingDemoRow& r : rows) {
        os << r.iteration << ',' << format_double(r.coverage) << ','
           << format_double(r.energy) << '\n';
    }
    return os.str();
}

std::string sequence_csv(const LabeledSequence& seq) {
    std::ostringstream os;
    os << "# meta: " << seq.meta.dump() << "\n";
    for (Eigen::Index j = 0; j < seq.dim(); ++j) os << "x" << j << ",";
    os << "y\n";
    for (Eigen::Index t = 0; t < seq.length(); ++t) {
        for (Eigen::Index j = 0; j < seq.dim(); ++j) {
            os << format_double(seq.X(t, j)) << ',';
        }
        os << format_double(seq.y[t]) << '\n';
    }
    return os.str();
}

LabeledSequence sequence_from_csv_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    LabeledSequence seq;
    Eigen::Index d = -1;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            const std::string tag = "# meta: ";
            if (line.rfind(tag, 0) == 0) {
                seq.meta = nlohmann::json::parse(line.substr(tag.size()));
            }
            continue;
        }
        if (d < 0) {
            // Header row: count columns, last one is y.
            d = static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ','));
            if (d < 1) throw DataError("sequence csv: header needs x columns and y");
            continue;
        }
        std::vector<double> vals;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
        if (static_cast<Eigen::Index>(vals.size()) != d + 1) {
            throw DataError("sequence csv: ragged row");
        }
        rows.push_back(std::move(vals));
    }
    if (d < 0 || rows.empty()) throw DataError("sequence csv: no data rows");
    seq.X.resize(static_cast<Eigen::Index>(rows.size()), d);
    seq.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t t = 0; t < rows.size(); ++t) {
        for (Eigen::Index j = 0; j < d; ++j) {
            seq.X(static_cast<Eigen::Index>(t), j) = rows[t][static_cast<std::size_t>(j)];
        }
        seq.y[static_cast<Eigen::Index>(t)] = rows[t].back();
    }
    return seq;
}

LabeledSequence read_sequence_csv(const std::string& path) {
    return sequence_from_csv_text(read_text_file(path));
}

namespace {
constexpr char kCacheMagic[6] = {'R', 'G', 'D', 'A', 'T', 'A'};
constexpr std::uint16_t kCacheVersion = 1;
}  // namespace

void write_sequence_cache(const std::string& path, const LabeledSequence& seq) {
    std::vector<char> buf;
    auto put = [&buf](const void* p, std::size_t len) {
        const auto* c = static_cast<const char*>(p);
        buf.insert(buf.end(), c, c + len);
    };
    auto put_u = [&put](auto v) { put(&v, sizeof(v)); };

    put(kCacheMagic, sizeof(kCacheMagic));
    put_u(kCacheVersion);
    const std::string meta = seq.meta.dump();
    put_u(static_cast<std::uint32_t>(meta.size()));
    put(meta.data(), meta.size());
    put_u(static_cast<std::uint64_t>(seq.length()));
    put_u(static_cast<std::uint64_t>(seq.dim()));
    for (Eigen::Index t = 0; t < seq.length(); ++t) {
        for (Eigen::Index j = 0; j < seq.dim(); ++j) put_u(seq.X(t, j));
    }
    for (Eigen::Index t = 0; t < seq.length(); ++t) put_u(seq.y[t]);
    const std::uint32_t crc = crc32(buf.data(), buf.size());
    put_u(crc);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("sequence cache: cannot open for writing: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw DataError("sequence cache: write failed: " + path);
}

LabeledSequence read_sequence_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("sequence cache: cannot open: " + path);
    std::vector<char> buf(std::istreambuf_iterator<char>(in), {});
    if (buf.size() < sizeof(kCacheMagic) + sizeof(std::uint16_t) + sizeof(std::uint32_t)) {
        throw DataError("sequence cache: truncated file");
    }
    std::uint32_t stored;
    std::memcpy(&stored, buf.data() + buf.size() - sizeof(stored), sizeof(stored));
    if (stored != crc32(buf.data(), buf.size() - sizeof(stored))) {
        throw DataError("sequence cache: checksum failure");
    }

    std::size_t pos = 0;
    const std::size_t end = buf.size() - sizeof(std::uint32_t);
    auto take = [&](void* p, std::size_t len) {
        if (pos + len > end) throw DataError("sequence cache: truncated payload");
        std::memcpy(p, buf.data() + pos, len);
        pos += len;
    };
    char magic[sizeof(kCacheMagic)];
    take(magic, sizeof(magic));
    if (std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0) {
        throw DataError("sequence cache: bad magic tag");
    }
    std::uint16_t version;
    take(&version, sizeof(version));
    if (version != kCacheVersion) throw DataError("sequence cache: unsupported version");
    std::uint32_t meta_len;
    take(&meta_len, sizeof(meta_len));
    std::string meta(meta_len, '\0');
    take(meta.data(), meta_len);
    std::uint64_t k, d;
    take(&k, sizeof(k));
    take(&d, sizeof(d));

    LabeledSequence seq;
    seq.meta = nlohmann::json::parse(meta);
    seq.X.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
    seq.y.resize(static_cast<Eigen::Index>(k));
    for (Eigen::Index t = 0; t < seq.length(); ++t) {
        for (Eigen::Index j = 0; j < seq.dim(); ++j) take(&seq.X(t, j), sizeof(double));
    }
    for (Eigen::Index t = 0; t < seq.length(); ++t) take(&seq.y[t], sizeof(double));
    if (pos != end) throw DataError("sequence cache: trailing bytes");
    return seq;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << content;
    if (!out) throw DataError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace resgas
