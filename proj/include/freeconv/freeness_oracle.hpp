#pragma once

// Reference evaluator for moments of words in freely independent variables,
// straight from the definition of freeness: an alternating product of centered
// elements has expectation zero. Expanding each letter as (a - E a) + E a and
// solving for the full word gives a recursion on strictly shorter words.
// Deliberately independent of the lattice code; used to cross-check it.

#include <map>
#include <vector>

namespace freeconv::oracle {

class FreeWordMoments
{
  public:
    /// moments[v][k-1] is E(x_v^k).
    explicit FreeWordMoments(std::vector<std::vector<double>> moments);

    /// E(x_(w_1) x_(w_2) ... x_(w_n)) for variable indices w_i.
    double expectation(const std::vector<int>& word);

  private:
    using Letters = std::vector<std::pair<int, int>>;  // (variable, power), adjacent variables differ

    double letters_expectation(const Letters& w);
    double single(int var, int power) const;

    std::vector<std::vector<double>> moments_;
    std::map<Letters, double> memo_;
};

}  // namespace freeconv::oracle
