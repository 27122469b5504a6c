#pragma once

#include <stdexcept>
#include <string>

namespace refp {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
  public:
    ParseError(const std::string & msg, int line, int col) :
        Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line_(line), col_(col)
    {
    }

    auto line() const -> int { return line_; }
    auto col() const -> int { return col_; }

  private:
    int line_, col_;
};

// Iteration caps, row budgets and search cutoffs.
class BudgetExceeded : public Error {
  public:
    using Error::Error;
};

}
