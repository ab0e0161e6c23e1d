#include "qmle/io.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace qmle::io {

std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016" PRIx64, h);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (!in.good() && !in.eof()) throw IoError("error while reading '" + path + "'");
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    // write-then-rename so a failed run leaves no partial output
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out << content;
        if (!out.good()) throw IoError("error while writing '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
}

bool file_exists(const std::string& path) {
    std::error_code ec;
    return std::filesystem::exists(path, ec);
}

std::string format_double(double v) {
    nlohmann::json j = v;  // shortest round-trip representation
    return j.dump();
}

namespace {

double parse_double(std::string_view field, const char* what) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw FormatError(std::string("bad ") + what + " value '" + std::string(field) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = line.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(line.substr(pos));
            return out;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
}

std::vector<std::string_view> lines_of(const std::string& text) {
    std::vector<std::string_view> out;
    std::string_view sv(text);
    std::size_t pos = 0;
    while (pos < sv.size()) {
        std::size_t end = sv.find('\n', pos);
        if (end == std::string_view::npos) end = sv.size();
        std::string_view line = sv.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) out.push_back(line);
        pos = end + 1;
    }
    return out;
}

}  // namespace

std::string homodyne_csv(const std::vector<HomodyneRecord>& records) {
    std::string out = "phase,quadrature\n";
    for (const HomodyneRecord& r : records) {
        out += format_double(r.phase);
        out += ',';
        out += format_double(r.x);
        out += '\n';
    }
    return out;
}

std::vector<HomodyneRecord> parse_homodyne_csv(const std::string& text) {
    const auto ls = lines_of(text);
    if (ls.empty() || ls[0] != "phase,quadrature")
        throw FormatError("homodyne CSV must start with header 'phase,quadrature'");
    std::vector<HomodyneRecord> out;
    out.reserve(ls.size() - 1);
    for (std::size_t i = 1; i < ls.size(); ++i) {
        const auto fields = split(ls[i], ',');
        if (fields.size() != 2)
            throw FormatError("homodyne CSV line " + std::to_string(i + 1) + ": need 2 fields");
        out.push_back(HomodyneRecord::wrapped(parse_double(fields[0], "phase"),
                                              parse_double(fields[1], "quadrature")));
    }
    return out;
}

std::string spin_csv(const std::vector<SpinOutcome>& outcomes) {
    std::string out = "ax,ay,az,bx,by,bz\n";
    for (const SpinOutcome& o : outcomes) {
        for (int i = 0; i < 3; ++i) {
            out += format_double(o.omega_a[static_cast<std::size_t>(i)]);
            out += ',';
        }
        for (int i = 0; i < 3; ++i) {
            out += format_double(o.omega_b[static_cast<std::size_t>(i)]);
            out += i == 2 ? '\n' : ',';
        }
    }
    return out;
}

std::vector<SpinOutcome> parse_spin_csv(const std::string& text) {
    const auto ls = lines_of(text);
    if (ls.empty() || ls[0] != "ax,ay,az,bx,by,bz")
        throw FormatError("spin CSV must start with header 'ax,ay,az,bx,by,bz'");
    std::vector<SpinOutcome> out;
    out.reserve(ls.size() - 1);
    for (std::size_t i = 1; i < ls.size(); ++i) {
        const auto fields = split(ls[i], ',');
        if (fields.size() != 6)
            throw FormatError("spin CSV line " + std::to_string(i + 1) + ": need 6 fields");
        SpinOutcome o;
        for (int k = 0; k < 3; ++k) {
            o.omega_a[static_cast<std::size_t>(k)] =
                parse_double(fields[static_cast<std::size_t>(k)], "direction");
            o.omega_b[static_cast<std::size_t>(k)] =
                parse_double(fields[static_cast<std::size_t>(k) + 3], "direction");
        }
        try {
            o.validate();
        } catch (const std::invalid_argument& e) {
            throw FormatError("spin CSV line " + std::to_string(i + 1) + ": " + e.what());
        }
        out.push_back(o);
    }
    return out;
}

json clicks_to_json(const ClickSummary& s) {
    return json{{"n_total", s.n_total}, {"n_clicks", s.n_clicks}};
}

ClickSummary clicks_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n_total") || !j.contains("n_clicks"))
        throw FormatError("click JSON needs fields n_total and n_clicks");
    ClickSummary s{j.at("n_total").get<std::int64_t>(), j.at("n_clicks").get<std::int64_t>()};
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    return s;
}

json density_to_json(const DensityMatrix& rho) {
    const int d = rho.dim();
    std::vector<double> re, im;
    re.reserve(static_cast<std::size_t>(d) * d);
    im.reserve(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            re.push_back(rho(i, j).real());
            im.push_back(rho(i, j).imag());
        }
    }
    return json{{"dim", d}, {"re", re}, {"im", im}};
}

DensityMatrix density_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.contains("im"))
        throw FormatError("density JSON needs fields dim, re, im");
    const int d = j.at("dim").get<int>();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (d < 1 || re.size() != static_cast<std::size_t>(d) * d || im.size() != re.size())
        throw FormatError("density JSON arrays must hold dim*dim row-major entries");
    CMat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const std::size_t idx = static_cast<std::size_t>(i) * d + k;
            m(i, k) = cxd(re[idx], im[idx]);
        }
    try {
        return DensityMatrix(std::move(m));
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

json gaussian_params_to_json(const GaussianParams& p) {
    return json{{"delta", p.delta}, {"kappa", p.kappa}, {"a", p.a}, {"b", p.b}};
}

GaussianParams gaussian_params_from_json(const json& j) {
    if (!j.is_object() || !j.contains("delta") || !j.contains("kappa"))
        throw FormatError("Gaussian parameter JSON needs fields delta, kappa, a, b");
    GaussianParams p{j.at("delta").get<double>(), j.at("kappa").get<double>(),
                     j.value("a", 0.0), j.value("b", 0.0)};
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    return p;
}

std::string sniff_data_format(const std::string& text) {
    std::string_view sv(text);
    if (sv.rfind("phase,quadrature", 0) == 0) return "homodyne-csv";
    if (sv.rfind("ax,ay,az,bx,by,bz", 0) == 0) return "spin-csv";
    const std::size_t first = sv.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && sv[first] == '{') {
        const json j = json::parse(text, nullptr, false);
        if (!j.is_discarded() && j.contains("n_total")) return "clicks-json";
    }
    throw FormatError("unrecognized data file format");
}

}  // namespace qmle::io
