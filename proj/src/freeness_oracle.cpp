#include "freeconv/freeness_oracle.hpp"

#include <stdexcept>
#include <string>

namespace freeconv::oracle {

namespace {

void push_merged(std::vector<std::pair<int, int>>& w, int var, int power)
{
    if (!w.empty() && w.back().first == var)
    {
        w.back().second += power;
    }
    else
    {
        w.emplace_back(var, power);
    }
}

}  // namespace

FreeWordMoments::FreeWordMoments(std::vector<std::vector<double>> moments) : moments_(std::move(moments)) {}

double FreeWordMoments::single(int var, int power) const
{
    if (power == 0)
    {
        return 1.0;
    }
    const auto& m = moments_.at(static_cast<std::size_t>(var));
    if (power > static_cast<int>(m.size()))
    {
        throw std::out_of_range("oracle: moment of order " + std::to_string(power) + " not supplied");
    }
    return m[static_cast<std::size_t>(power - 1)];
}

double FreeWordMoments::expectation(const std::vector<int>& word)
{
    Letters w;
    for (int v : word)
    {
        push_merged(w, v, 1);
    }
    return letters_expectation(w);
}

double FreeWordMoments::letters_expectation(const Letters& w)
{
    const std::size_t s = w.size();
    if (s == 0)
    {
        return 1.0;
    }
    if (s == 1)
    {
        return single(w[0].first, w[0].second);
    }
    if (auto it = memo_.find(w); it != memo_.end())
    {
        return it->second;
    }
    std::vector<double> mean(s);
    for (std::size_t i = 0; i < s; ++i)
    {
        mean[i] = single(w[i].first, w[i].second);
    }
    // 0 = E prod (w_i - mean_i) = sum over subsets S of prod_(i not in S) (-mean_i) E(w_S).
    // The full subset is the word itself.
    const std::size_t full = (std::size_t{1} << s) - 1;
    double rest = 0.0;
    for (std::size_t mask = 0; mask < full; ++mask)
    {
        double coeff = 1.0;
        Letters sub;
        for (std::size_t i = 0; i < s; ++i)
        {
            if (mask & (std::size_t{1} << i))
            {
                push_merged(sub, w[i].first, w[i].second);
            }
            else
            {
                coeff *= -mean[i];
            }
        }
        if (coeff != 0.0)
        {
            rest += coeff * letters_expectation(sub);
        }
    }
    const double value = -rest;
    memo_.emplace(w, value);
    return value;
}

}  // namespace freeconv::oracle
