#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "numrad/bounds.hpp"
#include "numrad/ensembles.hpp"
#include "numrad/rng.hpp"
#include "numrad/state.hpp"

using namespace numrad;
using Catch::Approx;

namespace {

AlgebraElement nilpotent2() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return AlgebraElement(m);
}

double component(const BoundReport& rep, const std::string& name) {
  for (const auto& [k, v] : rep.components)
    if (k == name) return v;
  FAIL("missing component " + name);
  return 0.0;
}

bool sound(const BoundReport& rep, double slack = 1e-9) {
  return rep.margin >= -slack * std::max(1.0, rep.rhs);
}

}  // namespace

TEST_CASE("power-sum bound examples", "[bounds]") {
  const BoundReport id2 = thm34_bound(AlgebraElement::identity(2), 2);
  REQUIRE(id2.lhs == Approx(1.0).margin(1e-10));
  REQUIRE(id2.rhs == Approx(1.0).margin(1e-10));
  REQUIRE(id2.tightness == Approx(1.0).margin(1e-9));

  const BoundReport nil = thm34_bound(nilpotent2(), 2);
  REQUIRE(nil.lhs == Approx(0.25).margin(1e-9));
  REQUIRE(nil.rhs == Approx(0.5).margin(1e-9));

  const BoundReport zero = thm34_bound(AlgebraElement::zero(3), 4);
  REQUIRE(zero.lhs == 0.0);
  REQUIRE(zero.rhs == 0.0);
  REQUIRE(zero.tightness == 1.0);

  REQUIRE_THROWS_AS(thm34_bound(AlgebraElement::identity(2), 1), Error);
  REQUIRE_THROWS_AS(thm34_bound(AlgebraElement::identity(2), 9), Error);
}

TEST_CASE("geometric-sum bound examples", "[bounds]") {
  const BoundReport id2 = thm34_chain_bound(AlgebraElement::identity(2), 2);
  REQUIRE(id2.rhs == Approx(1.0).margin(1e-10));
  REQUIRE(id2.lhs == Approx(1.0).margin(1e-10));

  const BoundReport nil = thm34_chain_bound(nilpotent2(), 3);
  REQUIRE(nil.rhs == Approx(2.0 / 3.0).margin(1e-10));
  REQUIRE(nil.lhs == Approx(0.125).margin(1e-9));

  REQUIRE(thm34_chain_bound(AlgebraElement::zero(2), 3).rhs == 0.0);
}

TEST_CASE("three-term cube bound", "[bounds]") {
  const BoundReport id = thm31_bound(AlgebraElement::identity(2), 2.0, 2.0);
  REQUIRE(id.rhs == Approx(1.0).margin(1e-10));
  REQUIRE(id.tightness == Approx(1.0).margin(1e-9));
  REQUIRE(component(id, "gram_term") == Approx(0.5).margin(1e-12));

  const BoundReport nil = thm31_bound(nilpotent2(), 2.0, 2.0);
  REQUIRE(nil.rhs == Approx(0.25).margin(1e-9));
  REQUIRE(nil.lhs == Approx(0.125).margin(1e-9));

  const BoundReport big = thm31_bound(AlgebraElement::identity(2), 1e6, 1e6);
  REQUIRE(big.rhs == Approx(1.0).epsilon(1e-5));

  REQUIRE_THROWS_AS(thm31_bound(AlgebraElement::identity(2), 0.0, 2.0), ZeroParameter);
}

TEST_CASE("cube-bound presets", "[bounds]") {
  BoundWorkspace wid(AlgebraElement::identity(3));
  const auto reps = thm31_presets(wid);
  REQUIRE(reps.size() == 4);
  REQUIRE(reps[0].bound_id == "c311");
  REQUIRE(reps[1].bound_id == "c313");
  REQUIRE(reps[2].bound_id == "c314");
  REQUIRE(reps[3].bound_id == "c312");
  for (const auto& r : reps) REQUIRE(r.rhs >= 1.0 - 1e-10);
  REQUIRE(reps[0].rhs == Approx(1.0).margin(1e-10));

  const BoundReport parent = thm31_bound(AlgebraElement::identity(3), 2.0, 2.0);
  REQUIRE(reps[0].rhs == Approx(parent.rhs).epsilon(1e-14));

  BoundWorkspace wnil(nilpotent2());
  const auto nil = thm31_presets(wnil);
  REQUIRE(nil[1].rhs == Approx(0.5).margin(1e-12));        // c313
  REQUIRE(nil[3].rhs == Approx(1.0 / 3.0).margin(1e-12));  // c312

  BoundWorkspace wzero(AlgebraElement::zero(2));
  for (const auto& r : thm31_presets(wzero)) REQUIRE(r.rhs == 0.0);
}

TEST_CASE("limit presets are approached by the parent bound", "[bounds]") {
  RngStream g(307);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 2 + static_cast<int>(g.next() % 3);
    const AlgebraElement a = sample_element({EnsembleKind::ginibre, d, 1, true}, g);
    BoundWorkspace w(a);
    const auto presets = thm31_presets(w);
    const double scale = std::max(1.0, std::pow(w.norm(), 3));
    const BoundReport lim = thm31_bound(w, 1e8, 1e8);
    REQUIRE(std::abs(lim.rhs - presets[1].rhs) <= 1e-7 * scale);  // c313
    const BoundReport mix = thm31_bound(w, 2.0, 1e8);
    REQUIRE(std::abs(mix.rhs - presets[2].rhs) <= 1e-7 * scale);  // c314
  }
}

TEST_CASE("min-product cube bound", "[bounds]") {
  const BoundReport id = thm32_bound(AlgebraElement::identity(2), 2.0);
  REQUIRE(id.rhs == Approx(1.0).margin(1e-10));
  REQUIRE(id.tightness == Approx(1.0).margin(1e-9));

  const BoundReport nil = thm32_bound(nilpotent2(), 2.0);
  REQUIRE(nil.rhs == Approx(0.5).margin(1e-10));
  REQUIRE(nil.lhs == Approx(0.125).margin(1e-9));
  REQUIRE_FALSE(nil.note.empty());

  // alpha = 1 is recorded, soundness only
  const BoundReport one = thm32_bound(nilpotent2(), 1.0);
  REQUIRE(sound(one));

  REQUIRE_THROWS_AS(thm32_bound(AlgebraElement::identity(2), 0.0), ZeroParameter);
}

TEST_CASE("equality probe for v(a) = ||a||", "[bounds]") {
  const PredicateReport id = thm32_equality_probe(AlgebraElement::identity(3));
  REQUIRE(id.applicable);
  REQUIRE(id.holds);

  RngStream g(311);
  const AlgebraElement u = sample_element({EnsembleKind::haar_unitary, 4}, g);
  const PredicateReport pu = thm32_equality_probe(u);
  REQUIRE(pu.applicable);
  REQUIRE(pu.holds);

  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 2.0;
  const PredicateReport nil = thm32_equality_probe(AlgebraElement(m));
  REQUIRE_FALSE(nil.applicable);
}

TEST_CASE("six-term degree-six bound", "[bounds]") {
  const MeanFunction id = MeanFunction::identity();
  const BoundReport one =
      thm33_bound(AlgebraElement::identity(2), id, 0.0, id, 0.0, 2.0, 2.0, 2.0);
  REQUIRE(one.rhs == Approx(1.0).margin(1e-10));
  REQUIRE(one.tightness == Approx(1.0).margin(1e-9));

  const BoundReport nil = thm33_bound(nilpotent2(), id, 0.0, id, 0.0, 2.0, 2.0, 2.0);
  REQUIRE(nil.rhs == Approx(0.125).margin(1e-10));
  REQUIRE(nil.lhs == Approx(1.0 / 64.0).margin(1e-9));

  const BoundReport zero = thm33_bound(AlgebraElement::zero(2), id, 0.0, id, 0.0, 2.0, 2.0, 2.0);
  REQUIRE(zero.rhs == 0.0);

  REQUIRE_THROWS_AS(thm33_bound(AlgebraElement::identity(2), id, 0.0, id, 0.0, 2.0, 0.0, 2.0),
                    ZeroParameter);
  REQUIRE_THROWS_AS(thm33_bound(AlgebraElement::identity(2), id, -0.3, id, 0.0, 2.0, 2.0, 2.0),
                    XiOutOfDomain);
}

TEST_CASE("degree-six preset equals the parametrized bound at its parameters",
          "[bounds]") {
  const BoundReport preset_id = thm33_preset(AlgebraElement::identity(3));
  REQUIRE(preset_id.rhs == Approx(1.0).margin(1e-10));

  const BoundReport preset_nil = thm33_preset(nilpotent2());
  REQUIRE(preset_nil.rhs == Approx(0.125).margin(1e-10));

  RngStream g(313);
  const MeanFunction id = MeanFunction::identity();
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 2 + static_cast<int>(g.next() % 3);
    const AlgebraElement a = sample_element({EnsembleKind::ginibre, d}, g);
    BoundWorkspace w(a);
    const BoundReport preset = thm33_preset(w);
    const BoundReport parent = thm33_bound(w, id, 0.0, id, 0.0, 2.0, 2.0, 2.0);
    REQUIRE(preset.rhs == Approx(parent.rhs).epsilon(1e-14));
  }
}

TEST_CASE("soundness of all bounds on random ensembles", "[bounds]") {
  RngStream g(317);
  const MeanFunction id = MeanFunction::identity();
  const MeanFunction aq = MeanFunction::affine_quarter();
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + static_cast<int>(g.next() % 3);
    const EnsembleKind kind = trial % 3 == 0   ? EnsembleKind::normal_random
                              : trial % 3 == 1 ? EnsembleKind::haar_unitary
                                               : EnsembleKind::ginibre;
    const AlgebraElement a = sample_element({kind, d, 1, true}, g);
    BoundWorkspace w(a);
    for (int n = 2; n <= 5; ++n) {
      REQUIRE(sound(thm34_bound(w, n)));
      REQUIRE(sound(thm34_chain_bound(w, n)));
    }
    REQUIRE(sound(thm31_bound(w, Cplx(1, 1), 0.5)));
    REQUIRE(sound(thm32_bound(w, Cplx(0.5, 0))));
    REQUIRE(sound(thm33_bound(w, aq, 0.25, id, 0.75, Cplx(1, 1), 2.0, 10.0)));
    for (const auto& rep : thm31_presets(w)) REQUIRE(sound(rep));
    REQUIRE(sound(thm33_preset(w)));
  }
}

TEST_CASE("dominance over the trivial bound", "[bounds]") {
  BoundWorkspace wid(AlgebraElement::identity(2));
  const PredicateReport at_id = dominance_check(thm34_bound(wid, 3), wid);
  REQUIRE(at_id.applicable);
  REQUIRE(at_id.holds);

  BoundWorkspace wnil(nilpotent2());
  const PredicateReport at_nil = dominance_check(thm33_preset(wnil), wnil);
  REQUIRE(at_nil.applicable);
  REQUIRE(at_nil.holds);

  RngStream g(331);
  for (int trial = 0; trial < 15; ++trial) {
    const AlgebraElement a = sample_element({EnsembleKind::ginibre, 5}, g);
    BoundWorkspace w(a);
    const PredicateReport p = dominance_check(thm34_bound(w, 4), w);
    REQUIRE(p.applicable);
    REQUIRE(p.holds);
    const PredicateReport c = dominance_check(thm31_presets(w)[0], w);
    REQUIRE(c.applicable);
    REQUIRE(c.holds);
  }

  const PredicateReport chain = dominance_check(thm34_chain_bound(wid, 3), wid);
  REQUIRE_FALSE(chain.applicable);
}

TEST_CASE("state-level power-sum step holds pointwise", "[bounds][oracle]") {
  RngStream g(337);
  for (int trial = 0; trial < 400; ++trial) {
    const int d = 1 + static_cast<int>(g.next() % 4);
    const int n = 2 + static_cast<int>(g.next() % 4);
    const State phi = sample_state(d, g);
    const AlgebraElement a = sample_element({EnsembleKind::ginibre, d}, g);
    const double lhs = std::pow(std::abs(state_apply(phi, a)), n);
    const double phi_astar2 = state_apply(phi, abs_square(adjoint(a))).real();
    double rhs = 0.0;
    for (int i = 1; i <= n - 1; ++i) {
      const double phi_ai2 = state_apply(phi, abs_square(matrix_power(a, i))).real();
      rhs += std::ldexp(std::sqrt(std::max(0.0, phi_ai2)) *
                            std::pow(std::sqrt(std::max(0.0, phi_astar2)), n - i),
                        -i);
    }
    rhs += std::ldexp(std::abs(state_apply(phi, matrix_power(a, n))), -(n - 1));
    REQUIRE(lhs <= rhs + 1e-10 * std::max(1.0, rhs));
  }
}

TEST_CASE("equality cases saturate at unitaries and their scalar multiples",
          "[bounds]") {
  RngStream g(347);
  for (int trial = 0; trial < 6; ++trial) {
    const int d = 2 + static_cast<int>(g.next() % 4);
    AlgebraElement u = sample_element({EnsembleKind::haar_unitary, d}, g);
    if (trial % 2 == 1) u = Cplx(0.7, 0.2) * u;  // scalar multiples saturate too
    BoundWorkspace w(u);
    for (int n = 2; n <= 6; ++n)
      REQUIRE(thm34_bound(w, n).tightness == Approx(1.0).margin(1e-9));
    REQUIRE(thm31_presets(w)[0].tightness == Approx(1.0).margin(1e-9));
    REQUIRE(thm32_bound(w, 2.0).tightness == Approx(1.0).margin(1e-9));
    REQUIRE(thm33_preset(w).tightness == Approx(1.0).margin(1e-9));
  }
}
