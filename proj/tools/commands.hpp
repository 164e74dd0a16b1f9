#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "report.hpp"

namespace weakcr::cli {

/// Bad flag values; reported with exit code 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::string out;             ///< path.json or path.csv; empty for none
  std::optional<double> tol;   ///< overrides every check threshold
  std::uint64_t seed = 314159;
  bool json = false;           ///< JSON on stdout instead of text
};

struct Model {
  enum class Kind { Boson, Swanson, BosonRotation, Matrix2x2 };
  Kind kind = Kind::Boson;
  double theta = 0.0;
  double s = 1.0;
  double q = 1.0;
  std::string text;
};

/// "boson", "boson_rotation", "swanson:<angle>", "matrix2x2:<s>,<q>". Angles
/// accept plain numbers and multiples of pi such as "pi/4" or "-3pi/8".
Model parse_model(const std::string& text);
double parse_angle(const std::string& text);

struct VerifyCrOptions {
  std::string model;
  int dim = 64;
  double alpha = 0.1;
  double beta = 0.1;
};

struct LadderOptions {
  std::string model = "swanson:0.3";
  int dim = 96;
  int len = 6;
};

struct WeightsOptions {
  std::optional<double> alpha;
  bool gaussian = false;
  int max_moment = 12;
};

struct NormalOrderOptions {
  std::string expr;
  std::string profile;  ///< "m0,m1,..." with "inf" allowed; empty = unbounded
  int dim = 64;
};

struct UncertaintyOptions {
  std::string model;
  std::string scan;   ///< "coherent:RxI[,basis:K][,width:W]" or "circle:P"
  std::string state;  ///< "coherent:x,y", "basis:k" or "phi:t"
  int dim = 64;
};

Report verify_cr(const VerifyCrOptions& o, const GlobalOptions& g);
Report ladder(const LadderOptions& o, const GlobalOptions& g);
Report weights(const WeightsOptions& o, const GlobalOptions& g);
Report normal_order(const NormalOrderOptions& o, const GlobalOptions& g);
Report uncertainty(const UncertaintyOptions& o, const GlobalOptions& g);

/// Full command line (argv[0] included). Exit code 0 iff every check passes,
/// 1 on a failed check, 2 on a usage or input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace weakcr::cli
