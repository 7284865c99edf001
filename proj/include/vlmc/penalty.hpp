#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>

#include "error.hpp"

namespace vlmc {

/// Penalizing term f(n) of the penalized-likelihood criterion.
///
///   bic:        f(n) = (|A|-1)/2 · log n
///   scaled_log: f(n) = c · log n
///   power:      f(n) = c · n^beta,  0 < beta < 1
class PenaltySpec {
 public:
  enum class Form { bic, scaled_log, power };

  static PenaltySpec bic() { return PenaltySpec(Form::bic, 1.0, 0.0); }
  static PenaltySpec scaled_log(double c) { return PenaltySpec(Form::scaled_log, c, 0.0); }
  static PenaltySpec power(double c, double beta) { return PenaltySpec(Form::power, c, beta); }

  /// Parses "bic", "log:c" or "pow:c,beta".
  static PenaltySpec parse(std::string_view text) {
    auto number = [&](std::string_view s) {
      std::string str(s);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(str, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != str.size())
        throw input_error("bad number \"" + str + "\" in penalty \"" + std::string(text) + "\"");
      return v;
    };
    if (text == "bic") return bic();
    if (text.starts_with("log:")) return scaled_log(number(text.substr(4)));
    if (text.starts_with("pow:")) {
      auto rest = text.substr(4);
      auto comma = rest.find(',');
      if (comma == std::string_view::npos)
        throw input_error("power penalty needs \"pow:c,beta\"");
      return power(number(rest.substr(0, comma)), number(rest.substr(comma + 1)));
    }
    throw input_error("unknown penalty \"" + std::string(text) + "\" (want bic, log:c, pow:c,beta)");
  }

  Form form() const noexcept { return form_; }
  double coefficient() const noexcept { return c_; }
  double exponent() const noexcept { return beta_; }

  /// f(n) for a sample of length n over an alphabet of the given size.
  double operator()(std::size_t n, std::size_t alphabet_size) const {
    const double x = static_cast<double>(n);
    switch (form_) {
      case Form::bic:
        return 0.5 * static_cast<double>(alphabet_size - 1) * std::log(x);
      case Form::scaled_log:
        return c_ * std::log(x);
      case Form::power:
        return c_ * std::pow(x, beta_);
    }
    return 0.0;
  }

  /// Same spec with the coefficient multiplied by `factor`; BIC becomes scaled_log.
  PenaltySpec scaled(double factor, std::size_t alphabet_size) const {
    switch (form_) {
      case Form::bic:
        return scaled_log(factor * 0.5 * static_cast<double>(alphabet_size - 1));
      case Form::scaled_log:
        return scaled_log(factor * c_);
      case Form::power:
        return power(factor * c_, beta_);
    }
    return *this;
  }

  std::string to_string() const {
    std::ostringstream os;
    os.precision(17);
    switch (form_) {
      case Form::bic:
        return "bic";
      case Form::scaled_log:
        os << "log:" << c_;
        break;
      case Form::power:
        os << "pow:" << c_ << ',' << beta_;
        break;
    }
    return os.str();
  }

  bool operator==(const PenaltySpec&) const = default;

 private:
  PenaltySpec(Form form, double c, double beta) : form_(form), c_(c), beta_(beta) {
    if (!(c > 0.0) || !std::isfinite(c))
      throw input_error("penalty coefficient must be positive and finite");
    if (form == Form::power && !(beta > 0.0 && beta < 1.0))
      throw input_error("power penalty exponent must lie in (0, 1)");
  }

  Form form_;
  double c_;
  double beta_;
};

}  // namespace vlmc
