#pragma once

namespace fxlv {

enum class OptionSide { call, put };

namespace bs {

// Standard normal CDF via erfc; absolute error below 1e-12.
double norm_cdf(double x);

// Inverse standard normal CDF for p in (0, 1). Rational initial guess refined
// by Halley steps against norm_cdf; round-trip |norm_cdf(norm_inv_cdf(p)) - p|
// stays below 1e-10 across [1e-10, 1 - 1e-10].
double norm_inv_cdf(double p);

// Garman-Kohlhagen vanilla prices. Rates enter as continuously compounded
// period averages over [0, T]: rd domestic (numeraire), rf foreign (carry).
// Requires spot > 0, strike > 0, maturity > 0 and vol >= 0; vol == 0 prices
// the discounted forward intrinsic.
double call_price(double spot, double strike, double maturity, double rd, double rf, double vol);
double put_price(double spot, double strike, double maturity, double rd, double rf, double vol);

// Spot deltas: call delta = e^{-rf T} Phi(d1), put delta = call delta - e^{-rf T}.
// Requires vol > 0.
double call_delta(double spot, double strike, double maturity, double rd, double rf, double vol);
double put_delta(double spot, double strike, double maturity, double rd, double rf, double vol);

double price(OptionSide side, double spot, double strike, double maturity, double rd, double rf,
             double vol);
double delta(OptionSide side, double spot, double strike, double maturity, double rd, double rf,
             double vol);

// Implied volatility of a call price by bracketed root finding on
// [1e-6, 5.0]; converges to |price(vol) - price| <= 1e-10 * spot. Prices
// outside the no-arbitrage band raise DomainError("price out of bounds").
double implied_vol(double price, double spot, double strike, double maturity, double rd,
                   double rf);

}  // namespace bs
}  // namespace fxlv
