#include "sfns/io.hpp"

#include <array>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sfns/errors.hpp"

namespace sfns {

namespace {

void write_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& is) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

void write_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

double read_f64(std::istream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

void expect_magic(std::istream& is, const char* magic, const char* what) {
    std::array<char, 4> buf{};
    is.read(buf.data(), 4);
    if (!is || std::memcmp(buf.data(), magic, 4) != 0)
        throw structural_error(std::string(what) + ": bad magic");
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os) throw structural_error("cannot open for writing: " + path.string());
    return os;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary) {
    std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
    if (!is) throw structural_error("cannot open for reading: " + path.string());
    return is;
}

}  // namespace

std::string format_double(double v) {
    std::ostringstream ss;
    ss.imbue(std::locale::classic());
    ss.precision(17);
    ss << v;
    return ss.str();
}

void write_field(const std::filesystem::path& path, const SpectralField& f) {
    auto os = open_out(path, true);
    os.write("SFLD", 4);
    write_u32(os, 1);
    write_u32(os, static_cast<std::uint32_t>(f.n()));
    write_u32(os, 2);
    write_u32(os, 1);  // normalization tag: forward transform carries 1/n^2
    os.write(reinterpret_cast<const char*>(f.data()),
             static_cast<std::streamsize>(f.size() * sizeof(std::complex<double>)));
}

SpectralField read_field(const std::filesystem::path& path) {
    auto is = open_in(path, true);
    expect_magic(is, "SFLD", "read_field");
    const auto version = read_u32(is);
    if (version != 1) throw structural_error("read_field: unsupported version");
    const auto n = read_u32(is);
    const auto d = read_u32(is);
    if (d != 2) throw structural_error("read_field: expected 2 components, got " +
                                       std::to_string(d));
    const auto norm = read_u32(is);
    if (norm != 1) throw structural_error("read_field: unknown normalization tag");
    SpectralField f(static_cast<int>(n));
    is.read(reinterpret_cast<char*>(f.data()),
            static_cast<std::streamsize>(f.size() * sizeof(std::complex<double>)));
    if (!is) throw structural_error("read_field: truncated file");
    return f;
}

nlohmann::json field_to_json(const SpectralField& f) {
    nlohmann::json j;
    j["n"] = f.n();
    j["d"] = 2;
    j["normalization"] = "forward-1/n^2";
    nlohmann::json coeffs = nlohmann::json::array();
    for (std::size_t i = 0; i < f.size(); ++i)
        coeffs.push_back({f.data()[i].real(), f.data()[i].imag()});
    j["coeffs"] = std::move(coeffs);
    return j;
}

SpectralField field_from_json(const nlohmann::json& j) {
    const int n = j.at("n").get<int>();
    if (j.at("d").get<int>() != 2)
        throw structural_error("field_from_json: expected 2 components");
    SpectralField f(n);
    const auto& coeffs = j.at("coeffs");
    if (coeffs.size() != f.size())
        throw structural_error("field_from_json: coefficient count mismatch");
    for (std::size_t i = 0; i < f.size(); ++i)
        f.data()[i] = {coeffs[i][0].get<double>(), coeffs[i][1].get<double>()};
    return f;
}

void write_scalar_path_csv(const std::filesystem::path& path, const ScalarPath& p) {
    auto os = open_out(path, false);
    os << "t,value\n";
    for (std::size_t i = 0; i < p.times.size(); ++i)
        os << format_double(p.times[i]) << ',' << format_double(p.values[i]) << '\n';
}

ScalarPath read_scalar_path_csv(const std::filesystem::path& path) {
    auto is = open_in(path, false);
    std::string line;
    if (!std::getline(is, line)) throw structural_error("scalar path csv: empty file");
    ScalarPath p;
    while (std::getline(is, line)) {
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw structural_error("scalar path csv: malformed row '" + line + "'");
        p.times.push_back(std::stod(line.substr(0, comma)));
        p.values.push_back(std::stod(line.substr(comma + 1)));
    }
    p.validate();
    return p;
}

void write_field_path(const std::filesystem::path& path, const FieldPath& p) {
    p.validate();
    auto os = open_out(path, true);
    os.write("SFPT", 4);
    write_u32(os, 1);
    write_u32(os, static_cast<std::uint32_t>(p.times.size()));
    write_u32(os, static_cast<std::uint32_t>(p.values.empty() ? 0 : p.values.front().n()));
    for (std::size_t i = 0; i < p.times.size(); ++i) {
        write_f64(os, p.times[i]);
        os.write(reinterpret_cast<const char*>(p.values[i].data()),
                 static_cast<std::streamsize>(p.values[i].size() * sizeof(std::complex<double>)));
    }
}

FieldPath read_field_path(const std::filesystem::path& path) {
    auto is = open_in(path, true);
    expect_magic(is, "SFPT", "read_field_path");
    if (read_u32(is) != 1) throw structural_error("read_field_path: unsupported version");
    const auto count = read_u32(is);
    const auto n = read_u32(is);
    FieldPath p;
    for (std::uint32_t i = 0; i < count; ++i) {
        p.times.push_back(read_f64(is));
        SpectralField f(static_cast<int>(n));
        is.read(reinterpret_cast<char*>(f.data()),
                static_cast<std::streamsize>(f.size() * sizeof(std::complex<double>)));
        p.values.push_back(std::move(f));
    }
    if (!is) throw structural_error("read_field_path: truncated file");
    p.validate();
    return p;
}

void write_trajectory(const std::filesystem::path& dir, const FieldPath& u,
                      const std::vector<DiagRow>& diag) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%06zu.sfld", i);
        write_field(dir / name, u.values[i]);
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(diag.size());
    for (const auto& d : diag)
        rows.push_back({d.t, d.energy_u, d.enstrophy_int, d.energy_sum, d.div_defect, d.norm_w,
                        d.norm_r_scaled});
    write_csv(dir / "diagnostics.csv",
              {"t", "energy_u", "enstrophy_int", "energy_sum", "div_defect", "norm_w",
               "norm_r_scaled"},
              rows);
}

void write_lift(const std::filesystem::path& path, const RoughLift& lift) {
    auto os = open_out(path, true);
    os.write("SFRL", 4);
    write_u32(os, 1);
    write_u32(os, static_cast<std::uint32_t>(lift.points()));
    write_u32(os, static_cast<std::uint32_t>(lift.modes()));
    write_f64(os, lift.p());
    for (double t : lift.times()) write_f64(os, t);
    for (int i = 0; i < lift.points(); ++i)
        for (int j = 0; j < lift.modes(); ++j) write_f64(os, lift.level1()(i, j));
    for (int i = 0; i + 1 < lift.points(); ++i) {
        const Eigen::MatrixXd l2 = lift.level2(i, i + 1);
        for (int r = 0; r < l2.rows(); ++r)
            for (int c = 0; c < l2.cols(); ++c) write_f64(os, l2(r, c));
    }
}

RoughLift read_lift(const std::filesystem::path& path) {
    auto is = open_in(path, true);
    expect_magic(is, "SFRL", "read_lift");
    if (read_u32(is) != 1) throw structural_error("read_lift: unsupported version");
    const int points = static_cast<int>(read_u32(is));
    const int modes = static_cast<int>(read_u32(is));
    const double p = read_f64(is);
    std::vector<double> times(static_cast<std::size_t>(points));
    for (auto& t : times) t = read_f64(is);
    Eigen::MatrixXd level1(points, modes);
    for (int i = 0; i < points; ++i)
        for (int j = 0; j < modes; ++j) level1(i, j) = read_f64(is);
    std::vector<Eigen::MatrixXd> adj;
    adj.reserve(static_cast<std::size_t>(points) - 1);
    for (int i = 0; i + 1 < points; ++i) {
        Eigen::MatrixXd l2(modes, modes);
        for (int r = 0; r < modes; ++r)
            for (int c = 0; c < modes; ++c) l2(r, c) = read_f64(is);
        adj.push_back(std::move(l2));
    }
    if (!is) throw structural_error("read_lift: truncated file");
    return RoughLift(std::move(times), std::move(level1), std::move(adj), p);
}

nlohmann::json lift_summary_json(const RoughLift& lift) {
    nlohmann::json j;
    j["points"] = lift.points();
    j["modes"] = lift.modes();
    j["p"] = lift.p();
    const auto norms = lift_variation_norms(lift);
    j["pvar_level1"] = norms.first;
    j["pvar_level2"] = norms.second;
    double worst = 0.0;
    const int n = lift.points();
    const int step = std::max(1, n / 24);  // sampled triples keep this O(n^2 / step)
    for (int i = 0; i < n; i += step)
        for (int k = i; k < n; k += step) {
            const int jdx = std::min(n - 1, k + step);
            worst = std::max(worst, chen_defect(lift, lift.times()[static_cast<std::size_t>(i)],
                                                lift.times()[static_cast<std::size_t>(k)],
                                                lift.times()[static_cast<std::size_t>(jdx)]));
        }
    j["chen_max"] = worst;
    return j;
}

nlohmann::json drift_to_json(const DriftResult& d) {
    nlohmann::json j;
    j["method"] = d.method;
    j["error_estimate"] = d.error_estimate;
    j["unresolved_mass"] = d.unresolved_mass;
    nlohmann::json coeffs = nlohmann::json::array();
    nlohmann::json errs = nlohmann::json::array();
    for (Eigen::Index i = 0; i < d.coeffs.size(); ++i) {
        coeffs.push_back(d.coeffs[i]);
        errs.push_back(i < d.coeff_stderr.size() ? d.coeff_stderr[i] : 0.0);
    }
    j["coeffs"] = std::move(coeffs);
    j["coeff_stderr"] = std::move(errs);
    j["field_l2"] = d.field.empty() ? 0.0 : l2_norm(d.field);
    return j;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    auto os = open_out(path, false);
    for (std::size_t i = 0; i < header.size(); ++i)
        os << header[i] << (i + 1 < header.size() ? "," : "");
    os << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw structural_error("write_csv: row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i)
            os << format_double(row[i]) << (i + 1 < row.size() ? "," : "");
        os << '\n';
    }
}

}  // namespace sfns
