#ifndef OPNORM_VERIFY_HPP
#define OPNORM_VERIFY_HPP

#include <string>
#include <vector>

namespace opnorm::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// All criterion ids with their suite names, in run order.
std::vector<std::pair<int, std::string>> criteria();

/// Runs one named suite ("all", a name from criteria(), or a numeric id).
/// Throws std::domain_error on unknown names.
std::vector<CriterionResult> run(const std::string& suite);

}  // namespace opnorm::verify

#endif
