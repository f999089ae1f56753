#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace addiff {

// 1-based text location. end_col is exclusive.
struct SourceSpan {
    int line = 1;
    int col = 1;
    int end_line = 1;
    int end_col = 1;
};

// A single finding from validation or guard analysis. `rule` is a stable
// machine-readable name, `subject` names the node / transition / variable
// concerned so diagnostics can be compared as sets.
struct Diagnostic {
    std::string rule;
    std::string subject;
    std::string message;

    bool operator==(const Diagnostic& o) const {
        return rule == o.rule && subject == o.subject && message == o.message;
    }
    bool operator<(const Diagnostic& o) const {
        if (rule != o.rule) return rule < o.rule;
        if (subject != o.subject) return subject < o.subject;
        return message < o.message;
    }
};

struct Diagnostics {
    std::vector<Diagnostic> items;

    bool ok() const { return items.empty(); }
    void add(std::string rule, std::string subject, std::string message) {
        items.push_back({std::move(rule), std::move(subject), std::move(message)});
    }
    std::string to_string() const {
        std::string out;
        for (const auto& d : items) {
            out += d.rule;
            out += " (";
            out += d.subject;
            out += "): ";
            out += d.message;
            out += '\n';
        }
        return out;
    }
};

struct ParseError {
    SourceSpan span;
    std::string message;
};

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Model is structurally unusable for the requested operation.
class ValidationError : public Error {
  public:
    explicit ValidationError(const Diagnostics& d)
        : Error("validation failed:\n" + d.to_string()), diags(d) {}
    Diagnostics diags;
};

// State or decision-diagram budget exhausted.
class BudgetError : public Error {
  public:
    using Error::Error;
};

// Runtime semantic failure (out-of-domain assignment, pseudo-node cycle, ...).
class SemanticsError : public Error {
  public:
    using Error::Error;
};

}  // namespace addiff
