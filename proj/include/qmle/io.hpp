#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "qmle/povm.hpp"
#include "qmle/states.hpp"

// File formats:
//   homodyne CSV   header "phase,quadrature", one record per line
//   spin CSV       header "ax,ay,az,bx,by,bz"
//   clicks JSON    {"n_total": N, "n_clicks": Nc}
//   density JSON   {"dim": d, "re": [row-major], "im": [row-major]}
// All numbers are locale-independent, full double precision.

namespace qmle::io {

using json = nlohmann::json;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fnv1a_digest(const std::string& bytes);  // "fnv1a64:<16 hex digits>"

std::string read_file(const std::string& path);                         // IoError
void write_file(const std::string& path, const std::string& content);   // IoError
bool file_exists(const std::string& path);

std::string format_double(double v);  // shortest round-trip decimal

// CSV / JSON codecs -----------------------------------------------------------

std::string homodyne_csv(const std::vector<HomodyneRecord>& records);
std::vector<HomodyneRecord> parse_homodyne_csv(const std::string& text);

std::string spin_csv(const std::vector<SpinOutcome>& outcomes);
std::vector<SpinOutcome> parse_spin_csv(const std::string& text);

json clicks_to_json(const ClickSummary& s);
ClickSummary clicks_from_json(const json& j);

json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const json& j);

json gaussian_params_to_json(const GaussianParams& p);
GaussianParams gaussian_params_from_json(const json& j);

/// "homodyne-csv", "spin-csv", "clicks-json", or throws FormatError.
std::string sniff_data_format(const std::string& text);

}  // namespace qmle::io
