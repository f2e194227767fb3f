#include <doctest.h>

#include "excitran/error.hpp"
#include "excitran/transport.hpp"
#include "support.hpp"

using namespace excitran;
using namespace excitran::testing;

namespace {

ScenarioConfig funnel_config(double gamma_recomb = 0.05) {
  ScenarioConfig c;
  c.trap = TrapSpec::at_sites({"s3"}, 1.0);
  c.initial = {InitialKind::site_localized, 0, "s1", 0};
  c.gamma_phi = 1.0;
  c.gamma_recomb = gamma_recomb;
  return c;
}

std::vector<OligomerLink> two_links() { return {{"b601", "b609", 42.0}, {"b601", "b608", 42.0}}; }

}  // namespace

TEST_CASE("single-site closed form by both methods") {
  const LindbladModel m(load_graph("single_site"), 0.0, 0.001, TrapSpec::at_sites({"s1"}, 1.0));
  const DensityMatrix rho0 = DensityMatrix::localized(1, 0);
  const double eta = 1.0 / 1.001, tau = 1.0 / (2.0 * 1.001);
  const TransportResult r = efficiency_resolvent(m, rho0);
  CHECK(std::abs(r.eta - eta) < 1e-12);
  CHECK(std::abs(r.tau - tau) < 1e-12);
  CHECK(r.method == TransportMethod::resolvent);
  CHECK(std::abs(r.eta + r.recombined - 1.0) < 1e-12);
  const TransportResult q = efficiency_quadrature(m, rho0);
  CHECK(std::abs(q.eta - eta) < 1e-6);
  CHECK(std::abs(q.tau - tau) < 1e-6);
  CHECK(q.method == TransportMethod::quadrature);
  CHECK(q.tail_bound < 1e-6);
}

TEST_CASE("no trapping rate gives zero efficiency") {
  const LindbladModel m(load_graph("funnel3"), 2.0, 0.01, TrapSpec::at_sites({"s3"}, 0.0));
  const TransportResult r = efficiency_resolvent(m, DensityMatrix::localized(3, 0));
  CHECK(r.eta == 0.0);
  CHECK(std::isnan(r.tau));
  CHECK(std::abs(r.recombined - 1.0) < 1e-9);
  const LindbladModel none(load_graph("funnel3"), 2.0, 0.01, TrapSpec::none());
  CHECK_THROWS_AS(efficiency_resolvent(none, DensityMatrix::localized(3, 0)), ValidationError);
}

TEST_CASE("resolvent, quadrature and reference agree on small models") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial;
    const SiteGraph g = random_graph(n, rng);
    const LindbladModel m(g, 0.5 + 10.0 * u(rng), 0.001 + 0.05 * u(rng), TrapSpec::at_sites({"s1"}, 0.5 + u(rng)));
    const DensityMatrix rho0 = random_state(n, rng);
    const TransportResult r = efficiency_resolvent(m, rho0);
    const TransportResult q = efficiency_quadrature(m, rho0);
    const ReferenceTransport ref = reference_transport(m, rho0.matrix());
    CHECK(std::abs(r.eta - ref.eta) < 1e-9);
    CHECK(std::abs(r.tau - ref.tau) < 1e-7 * std::max(1.0, ref.tau));
    CHECK(std::abs(r.eta - q.eta) < 1e-6);
    CHECK(std::abs(r.tau - q.tau) < 1e-4);
    CHECK(r.eta >= 0.0);
    CHECK(r.eta <= 1.0 + 1e-9);
    CHECK(r.tau > 0.0);
  }
}

TEST_CASE("exciton traps use the eigenprojector") {
  const SiteGraph g = load_graph("funnel3");
  const LindbladModel m(g, 3.0, 0.01, TrapSpec::at_excitons({0, 1}, 1.0));
  const DensityMatrix rho0 = DensityMatrix::localized(3, 0);
  const TransportResult r = efficiency_resolvent(m, rho0);
  const TransportResult q = efficiency_quadrature(m, rho0);
  CHECK(std::abs(r.eta - q.eta) < 1e-6);
  CHECK(std::abs(r.tau - q.tau) < 1e-4);
}

TEST_CASE("unreachable trap") {
  Eigen::Vector3d eps(0.0, 50.0, -100.0);
  Eigen::Matrix3d v = Eigen::Matrix3d::Zero();
  v(0, 1) = v(1, 0) = 40.0;
  const LindbladModel m(make_graph(eps, v), 0.0, 0.01, TrapSpec::at_sites({"s3"}, 1.0));
  const DensityMatrix rho0 = DensityMatrix::localized(3, 0);
  CHECK(efficiency_quadrature(m, rho0).eta < 1e-6);
  CHECK(efficiency_resolvent(m, rho0).eta < 1e-6);
}

TEST_CASE("quadrature horizon") {
  SUBCASE("stable under horizon changes without dephasing") {
    const LindbladModel m(load_graph("dimer_degenerate"), 0.0, 0.001, TrapSpec::at_sites({"s2"}, 1.0));
    const DensityMatrix rho0 = DensityMatrix::localized(2, 0);
    QuadratureOptions a, b;
    a.horizon = 50.0;
    b.horizon = 100.0;
    CHECK(std::abs(efficiency_quadrature(m, rho0, a).eta - efficiency_quadrature(m, rho0, b).eta) < 1e-7);
  }
  SUBCASE("cap exceeded") {
    const LindbladModel m(load_graph("funnel3"), 1.0, 0.001, TrapSpec::at_sites({"s3"}, 1.0));
    QuadratureOptions opts;
    opts.horizon = 0.5;
    opts.max_horizon = 1.0;
    try {
      efficiency_quadrature(m, DensityMatrix::localized(3, 0), opts);
      FAIL("expected HorizonError");
    } catch (const HorizonError& e) {
      CHECK(e.horizon() == 1.0);
      CHECK(e.residual_trace() > 1e-6);
    }
  }
  SUBCASE("no loss channel and no horizon") {
    const LindbladModel m(load_graph("funnel3"), 1.0, 0.0, TrapSpec::none());
    CHECK_THROWS_AS(efficiency_quadrature(m, DensityMatrix::localized(3, 0)), ValidationError);
  }
  SUBCASE("tail attribution") {
    const LindbladModel m(load_graph("funnel3"), 1.0, 0.05, TrapSpec::at_sites({"s3"}, 1.0));
    QuadratureOptions opts;
    opts.trace_threshold = 1e-3;
    const TransportResult coarse = efficiency_quadrature(m, DensityMatrix::localized(3, 0), opts);
    const TransportResult exact = efficiency_resolvent(m, DensityMatrix::localized(3, 0));
    CHECK(coarse.tail_bound > 0.0);
    CHECK(coarse.tail_bound < 1e-3);
    CHECK(std::abs(coarse.eta - exact.eta) < coarse.tail_bound);
    CHECK(std::abs(coarse.eta + coarse.recombined + coarse.residual_trace - 1.0) < 1e-6);
  }
}

TEST_CASE("probability accounting on the six-site funnel") {
  const SiteGraph g = load_graph("funnel6");
  for (double gamma_phi : {0.0, 0.3, 5.0, 40.0}) {
    const LindbladModel m(g, gamma_phi, 0.02, TrapSpec::at_sites({"s6"}, 1.0));
    const DensityMatrix rho0 = DensityMatrix::localized(6, 0);
    const TransportResult q = efficiency_quadrature(m, rho0);
    CHECK(std::abs(q.eta + q.recombined + q.residual_trace - 1.0) < 1e-6);
    if (gamma_phi > 0) {
      const TransportResult r = efficiency_resolvent(m, rho0);
      CHECK(std::abs(r.eta + r.recombined - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("efficiency never increases with recombination") {
  const SiteGraph g = load_graph("funnel6");
  for (double gamma_phi : {0.5, 5.0, 50.0}) {
    double previous = 2.0;
    for (double gamma : {0.0005, 0.005, 0.05, 0.5}) {
      const double eta =
          efficiency_resolvent(LindbladModel(g, gamma_phi, gamma, TrapSpec::at_sites({"s6"}, 1.0)),
                               DensityMatrix::localized(6, 0))
              .eta;
      CHECK(eta <= previous + 1e-12);
      previous = eta;
    }
  }
}

TEST_CASE("temperature map") {
  const BathSpec bath;
  const double g77 = dephasing_from_temperature(77.0, bath);
  CHECK(dephasing_from_temperature(154.0, bath) == 2.0 * g77);
  // Linear frequency convention: 2 pi * c * k_B T * (E_r / w_c).
  CHECK(g77 == doctest::Approx(2.0 * std::numbers::pi * 2.99792458e-2 * 0.6950348 * 77.0 * 35.0 / 150.0));
  CHECK_THROWS_AS(dephasing_from_temperature(0.0, bath), ValidationError);
  CHECK_THROWS_AS(dephasing_from_temperature(77.0, BathSpec{-1.0, 150.0}), ValidationError);
  CHECK_THROWS_AS(dephasing_from_temperature(77.0, BathSpec{35.0, 0.0}), ValidationError);
}

TEST_CASE("dephasing sweeps") {
  SUBCASE("single site is insensitive to dephasing") {
    ScenarioConfig c;
    c.trap = TrapSpec::at_sites({"s1"}, 1.0);
    c.gamma_phi = 1.0;
    const Scenario s(load_graph("single_site"), c);
    const std::vector<double> gammas = {0.0, 0.1, 1.0, 10.0, 100.0};
    const SweepResult r = dephasing_sweep(s, gammas);
    REQUIRE(r.rows.size() == gammas.size());
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      CHECK(r.rows[i].gamma_phi == gammas[i]);
      REQUIRE(r.rows[i].result);
      CHECK(std::abs(r.rows[i].result->eta - 1.0 / 1.001) < 1e-6);
    }
    CHECK(r.rows[0].result->method == TransportMethod::quadrature);
    CHECK(r.rows[1].result->method == TransportMethod::resolvent);
  }
  SUBCASE("row errors do not stop the sweep") {
    ScenarioConfig c = funnel_config(0.0);
    const Scenario s(load_graph("funnel3"), c);
    SweepOptions opts;
    opts.quadrature.horizon = 0.1;
    opts.quadrature.max_horizon = 0.1;
    const std::vector<double> gammas = {0.0, 1.0};
    const SweepResult r = dephasing_sweep(s, gammas, opts);
    CHECK_FALSE(r.rows[0].result);
    CHECK_FALSE(r.rows[0].error.empty());
    CHECK(r.rows[1].result);
  }
  SUBCASE("funnel has an interior maximum") {
    const Scenario s(load_graph("funnel3"), funnel_config());
    std::vector<double> gammas;
    for (int i = 0; i <= 20; ++i) gammas.push_back(0.01 * std::pow(10.0, 0.2 * i));
    const SweepResult r = dephasing_sweep(s, gammas);
    std::size_t best = 0;
    for (std::size_t i = 0; i < r.rows.size(); ++i)
      if (r.rows[i].result->eta > r.rows[best].result->eta) best = i;
    CHECK(best > 0);
    CHECK(best + 1 < r.rows.size());
  }
  SUBCASE("parallel output matches serial output") {
    const Scenario s(load_graph("funnel3"), funnel_config());
    const std::vector<double> gammas = {0.0, 0.05, 0.5, 5.0, 50.0};
    const SweepResult a = dephasing_sweep(s, gammas, {1, {}});
    const SweepResult b = dephasing_sweep(s, gammas, {3, {}});
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      CHECK(a.rows[i].result->eta == b.rows[i].result->eta);
      CHECK(a.rows[i].result->tau == b.rows[i].result->tau);
    }
  }
  SUBCASE("validation") {
    const Scenario s(load_graph("funnel3"), funnel_config());
    CHECK_THROWS_AS(dephasing_sweep(s, std::vector<double>{}), ValidationError);
    CHECK_THROWS_AS(dephasing_sweep(s, std::vector<double>{-1.0}), ValidationError);
  }
}

TEST_CASE("disorder averages") {
  const Scenario s(load_graph("funnel3"), funnel_config());
  const std::vector<double> gammas = {0.01, 1.0, 20.0, 100.0};
  const SweepResult clean = dephasing_sweep(s, gammas);

  SUBCASE("zero sigma reproduces the clean sweep") {
    const DisorderResult d = disorder_average(s, {0.0, 5, 1}, gammas);
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      CHECK(d.rows[i].eta_mean == clean.rows[i].result->eta);
      CHECK(d.rows[i].eta_std == 0.0);
      CHECK(d.rows[i].n_ok == 5);
    }
  }
  SUBCASE("one realization flags its spread") {
    const DisorderResult d = disorder_average(s, {20.0, 1, 1}, gammas);
    for (const auto& row : d.rows) {
      CHECK(row.eta_std == 0.0);
      CHECK(row.std_degenerate);
    }
  }
  SUBCASE("Monte-Carlo mean stays near the clean curve") {
    const DisorderResult d = disorder_average(s, {20.0, 100, 77}, gammas, {2, {}});
    std::size_t best = 0;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      const double se = d.rows[i].eta_std / std::sqrt(100.0);
      CHECK(std::abs(d.rows[i].eta_mean - clean.rows[i].result->eta) < 3.0 * se);
      if (d.rows[i].eta_mean > d.rows[best].eta_mean) best = i;
    }
    CHECK(best > 0);
    CHECK(best + 1 < gammas.size());
    // Scheduling does not change the numbers.
    const DisorderResult serial = disorder_average(s, {20.0, 100, 77}, gammas, {1, {}});
    for (std::size_t i = 0; i < gammas.size(); ++i) CHECK(serial.rows[i].eta_mean == d.rows[i].eta_mean);
  }
}

TEST_CASE("scenario validation") {
  const SiteGraph toy = load_graph("lhcii_toy");
  ScenarioConfig wire;
  wire.role = Role::wire;
  wire.oligomer = {2, Topology::chain, two_links()};
  wire.initial = {InitialKind::lowest_eigenstate_of_monomer, 0, "", 0};
  wire.gamma_phi = 12.0;

  SUBCASE("wire with sink on the other monomer") {
    wire.active_sinks = std::vector<int>{1};
    const Scenario s(toy, wire);
    CHECK(s.trap().sites.size() == 3);
    CHECK(s.trap().sites[0] == "a610_1");
    const DensityMatrix rho0 = s.initial_state();
    for (int i = toy.n_sites(); i < 2 * toy.n_sites(); ++i) CHECK(std::abs(rho0(i, i)) < 1e-15);
    const TransportResult r = efficiency(s.model(), rho0);
    CHECK(r.eta > 0.0);
    CHECK(r.eta < 1.0);
  }
  SUBCASE("wire with sink on the entry monomer is rejected") {
    wire.active_sinks = std::vector<int>{0};
    CHECK_THROWS_AS(Scenario(toy, wire), ValidationError);
    wire.active_sinks = std::vector<int>{0, 1};
    CHECK_THROWS_AS(Scenario(toy, wire), ValidationError);
  }
  SUBCASE("wire needs a monomer-local start") {
    wire.active_sinks = std::vector<int>{1};
    wire.initial = {InitialKind::highest_eigenstate, 0, "", 0};
    CHECK_THROWS_AS(Scenario(toy, wire), ValidationError);
    wire.initial = {InitialKind::site_localized, 0, "a610", 0};
    CHECK_NOTHROW(Scenario(toy, wire));
    wire.initial = {InitialKind::site_localized, 0, "b601", 0};
    CHECK_THROWS_AS(Scenario(toy, wire), ValidationError);
  }
  SUBCASE("other invariants") {
    ScenarioConfig c;
    c.gamma_phi = 1.0;
    c.oligomer = {3, Topology::ring, two_links()};
    c.active_sinks = std::vector<int>{3};
    CHECK_THROWS_AS(Scenario(toy, c), ValidationError);
    c.active_sinks = std::vector<int>{1, 1};
    CHECK_THROWS_AS(Scenario(toy, c), ValidationError);
    c.active_sinks = std::vector<int>{};
    CHECK(Scenario(toy, c).trap().mode == TrapMode::none);
    c.active_sinks.reset();
    c.trap = TrapSpec::at_excitons({0}, 1.0);
    CHECK_NOTHROW(Scenario(toy, c));
    c.active_sinks = std::vector<int>{0};
    CHECK_THROWS_AS(Scenario(toy, c), ValidationError);
    c.active_sinks.reset();
    c.gamma_phi.reset();
    CHECK_THROWS_AS(Scenario(toy, c), ValidationError);
    c.temperature_k = 300.0;
    CHECK(Scenario(toy, c).gamma_phi() == dephasing_from_temperature(300.0, c.bath));
    c.gamma_phi = 1.0;
    CHECK_THROWS_AS(Scenario(toy, c), ValidationError);
    c.gamma_phi.reset();
    c.initial = {InitialKind::eigenstate, 0, "", 24};
    CHECK_THROWS_AS(Scenario(toy, c), ValidationError);
    c.initial = {InitialKind::site_localized, 0, "zz", 0};
    CHECK_THROWS_AS(Scenario(toy, c), ValidationError);
  }
  SUBCASE("initial states") {
    ScenarioConfig c;
    c.gamma_phi = 1.0;
    c.oligomer = {2, Topology::chain, two_links()};
    const Scenario s(toy, c);
    const Spectrum sp = spectrum(s.graph());
    const DensityMatrix top = s.initial_state();
    const Eigen::VectorXcd v = sp.vectors.col(sp.vectors.cols() - 1).cast<cd>();
    CHECK(std::abs((v.adjoint() * top.matrix() * v)(0, 0).real() - 1.0) < 1e-12);
    c.initial = {InitialKind::site_localized, 1, "b601", 0};
    CHECK(Scenario(toy, c).initial_state()(8, 8).real() == 1.0);
    c.initial = {InitialKind::site_localized, 0, "b601_1", 0};
    CHECK(Scenario(toy, c).initial_state()(8, 8).real() == 1.0);
  }
}

TEST_CASE("wire direction matters for directional links") {
  const SiteGraph toy = load_graph("lhcii_toy");
  ScenarioConfig forward;
  forward.role = Role::wire;
  forward.oligomer = {2, Topology::chain, {{"b601", "b609", 42.0}, {"a612", "a603", 30.0}}};
  forward.initial = {InitialKind::lowest_eigenstate_of_monomer, 0, "", 0};
  forward.active_sinks = std::vector<int>{1};
  forward.gamma_phi = 12.0;
  ScenarioConfig backward = forward;
  backward.initial.monomer = 1;
  backward.active_sinks = std::vector<int>{0};
  const Scenario f(toy, forward), b(toy, backward);
  const double eta_f = efficiency(f.model(), f.initial_state()).eta;
  const double eta_b = efficiency(b.model(), b.initial_state()).eta;
  CHECK(std::abs(eta_f - eta_b) > 1e-6);
}

TEST_CASE("scenario bundle") {
  SUBCASE("monomer dynamics show two timescales") {
    ScenarioConfig c;
    c.trap = TrapSpec::none();
    c.gamma_phi = 3.0;
    const Scenario s(load_graph("lhcii_toy"), c);
    RunRequest req;
    for (int i = 0; i <= 400; ++i) req.sample_times.push_back(0.05 * i);
    req.partitions = {{"bS", {"b601", "b608", "b609"}}, {"aoutS", {"a610", "a611", "a612"}},
                      {"aS", {"a602", "a603", "a610", "a611", "a612"}}};
    req.mutual_information = {{"bS", "aoutS"}};
    req.negativity = {{"bS", "aoutS"}};
    req.concurrence = {{"a610", "a611"}};
    const ScenarioBundle b = scenario_run(s, req);
    CHECK(b.times.size() == 401);
    CHECK(b.site_labels.size() == 8);
    CHECK(b.partition_populations.size() == 3);
    CHECK(b.mutual_information[0].values.size() == 401);
    CHECK_FALSE(b.transport);
    REQUIRE(b.fit);
    CHECK(b.fit->t1 < 1.0);
    CHECK(b.fit->t2 > 1.0);
    CHECK(b.fit->t1 < b.fit->t2);
    for (std::size_t i = 0; i < b.times.size(); ++i) {
      double band_sum = 0.0;
      for (const auto& e : b.exciton_bands) band_sum += e.values[i];
      CHECK(std::abs(band_sum - b.trace[i]) < 1e-10);
    }
  }
  SUBCASE("unknown partitions in pairs are rejected") {
    ScenarioConfig c;
    c.gamma_phi = 3.0;
    const Scenario s(load_graph("lhcii_toy"), c);
    RunRequest req;
    req.sample_times = {0.0, 1.0};
    req.mutual_information = {{"x", "y"}};
    CHECK_THROWS_AS(scenario_run(s, req), ValidationError);
  }
  SUBCASE("oligomer comparison in one table") {
    const SiteGraph toy = load_graph("lhcii_toy");
    const std::vector<double> gammas = {1.0, 12.0};
    std::vector<SweepResult> tables;
    for (int n : {3, 4}) {
      ScenarioConfig c;
      c.gamma_phi = 12.0;
      c.oligomer = {n, Topology::ring, two_links()};
      tables.push_back(dephasing_sweep(Scenario(toy, c), gammas));
    }
    for (const auto& t : tables)
      for (const auto& row : t.rows) CHECK(row.result);
  }
}

TEST_CASE("default partitions and site resolution") {
  const auto parts = default_lhcii_partitions();
  CHECK(parts.size() == 7);
  const SiteGraph full = load_graph("lhcii_template");
  const SiteGraph trimer = assemble_oligomer(full, {3, Topology::ring, {}});
  for (const auto& p : parts) CHECK_NOTHROW(resolve_partition(trimer, p));
  CHECK(resolve_site(trimer, "a610") == trimer.index_of("a610_0"));
  CHECK(resolve_site(trimer, "a610", 2) == trimer.index_of("a610_2"));
  CHECK(resolve_site(trimer, "a610_1", 2) == trimer.index_of("a610_1"));
  CHECK_THROWS_AS(resolve_site(trimer, "x"), ValidationError);
}
