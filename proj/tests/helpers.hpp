#pragma once

// Shared conveniences for the unit test suites. The suites embed the
// program sources they exercise so they run without any data directory.

#include <string>

#include "loopinvar/frontend.hpp"
#include "loopinvar/moments.hpp"

namespace testutil {

inline loopinvar::Program program_of(const std::string& source) {
  return loopinvar::desugar(loopinvar::parse_program(source));
}

inline loopinvar::MomentContext ctx_of(const std::string& source) {
  return loopinvar::MomentContext(program_of(source));
}

// Coupled quadratic updates driven by an alternating flag.
inline const char* kSquaresSrc = R"(z = 0
while true:
  z = 1 - z
  x = 2*x + y^2 + z
  y = 2*y - y^2 + 2*z
end
)";

// Two coupled nonlinear updates chosen by a fair coin.
inline const char* kMarkov1Src = R"(while true:
  s = Bernoulli(1/2)
  if s = 0 then
    (x, y) = x + x*y, (1/3)*x + (2/3)*y + x*y
  else
    (x, y) = x + y + (2/3)*x*y, 2*y + (2/3)*x*y
  end
end
)";

// A chained linear map followed by a square and a cube of the same sum.
inline const char* kSquaresAndCubeSrc = R"(while true:
  w = x + y
  x = w^2
  y = w^3
end
)";

// Parametric quadratic system fed by a multiplicative uniform draw.
inline const char* kProbSquaresSrc = R"(params d, f
g = 1
while true:
  g = Uniform(g, 2*g)
  (a, b, c) = a^2 + 2*b*c - d*f + b, d*f - a^2 + 2*b*d + 2*c, g - b*c - b*d + (1/2)*a
end
)";

// Compartment exchange with random initial census; the total telescopes.
inline const char* kBeesSrc = R"(params Delta, alpha, beta1, beta2, gamma, delta
x = Normal(475, 5)
y1 = Uniform(350, 400)
y2 = Uniform(100, 150)
z1 = Normal(35, 1.5)
z2 = Normal(35, 1.5)
while true:
  (x, y1, y2, z1, z2) = x - Delta*(beta1*x*y1 + beta2*x*y2), y1 + Delta*(beta1*x*y1 - gamma*y1 + delta*beta1*y1*z1 + alpha*beta1*y1*z2), y2 + Delta*(beta2*x*y2 - gamma*y2 + delta*beta2*y2*z2 + alpha*beta2*y2*z1), z1 + Delta*(gamma*y1 - delta*beta1*y1*z1 - alpha*beta2*y2*z1), z2 + Delta*(gamma*y2 - delta*beta2*y2*z2 - alpha*beta1*y1*z2)
end
)";

}  // namespace testutil
