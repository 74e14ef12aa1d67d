#include "mfgn/acvf.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "mfgn/errors.hpp"

namespace mfgn {

AcvfSequence::AcvfSequence(double step, Eigen::VectorXd v) : dt(step), values(std::move(v)) {}

void AcvfSequence::validate() const {
    if (!(dt > 0.0)) throw DomainError("AcvfSequence: dt must be positive");
    if (values.size() == 0) throw DomainError("AcvfSequence: empty sequence");
    if (!(values(0) > 0.0)) throw DomainError("AcvfSequence: lag-0 value must be positive");
}

std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_acvf_csv(std::ostream& out, const AcvfSequence& acvf) {
    out << "lag,value\n";
    for (Eigen::Index k = 0; k < acvf.values.size(); ++k)
        out << k << ',' << format_real(acvf.values(k)) << '\n';
}

AcvfSequence read_acvf_csv(std::istream& in, double dt) {
    std::string line;
    if (!std::getline(in, line) || line != "lag,value")
        throw DomainError("read_acvf_csv: expected header 'lag,value'");
    std::vector<double> values;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw DomainError("read_acvf_csv: malformed row " + std::to_string(row));
        const long lag = std::stol(line.substr(0, comma));
        if (lag != static_cast<long>(values.size()))
            throw DomainError("read_acvf_csv: lags must be consecutive from 0 (row " +
                              std::to_string(row) + ")");
        values.push_back(std::stod(line.substr(comma + 1)));
    }
    AcvfSequence acvf(dt, Eigen::Map<Eigen::VectorXd>(values.data(), values.size()));
    acvf.validate();
    return acvf;
}

}  // namespace mfgn
