#ifndef OPNORM_ERRORS_HPP
#define OPNORM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace opnorm {

// Size/memory cap violations. Distinct from std::domain_error so the CLI can
// map them to their own exit code.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input files. Carries a line number for diagnostics.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& file, long line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          file_(file),
          line_(line) {}

    const std::string& file() const { return file_; }
    long line() const { return line_; }

private:
    std::string file_;
    long line_;
};

}  // namespace opnorm

#endif
