#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "excitran/error.hpp"
#include "excitran/model.hpp"
#include "support.hpp"

using namespace excitran;
using namespace excitran::testing;

namespace {

int count_cross_block(const SiteGraph& g, int block, double value) {
  int count = 0;
  for (int i = 0; i < g.n_sites(); ++i)
    for (int j = i + 1; j < g.n_sites(); ++j)
      if (i / block != j / block && g.couplings()(i, j) != 0.0) {
        CHECK(g.couplings()(i, j) == value);
        ++count;
      }
  return count;
}

const char* two_site = R"({
  "sites": [{"label": "s1", "type": "a", "layer": "stromal"},
            {"label": "s2", "type": "b", "layer": "lumenal"}],
  "energies_cm1": [0, 0],
  "couplings_cm1": [[0, 100], [100, 0]]
})";

}  // namespace

TEST_CASE("load two-site graph") {
  const SiteGraph g = parse_site_graph(two_site);
  CHECK(g.n_sites() == 2);
  CHECK(g.couplings()(0, 1) == 100.0);
  CHECK(g.couplings()(1, 0) == 100.0);
  CHECK(g.meta(1).chl_type == ChlType::b);
  CHECK(g.meta(1).layer == Layer::lumenal);
  CHECK(g.index_of("s2") == 1);
  CHECK_THROWS_AS(g.index_of("nope"), ValidationError);
}

TEST_CASE("asymmetric couplings are rejected") {
  const char* text = R"({"sites": [{"label": "s1", "type": "a", "layer": "stromal"},
                                    {"label": "s2", "type": "a", "layer": "stromal"}],
                         "energies_cm1": [0, 0], "couplings_cm1": [[0, 100], [99, 0]]})";
  try {
    parse_site_graph(text);
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("asymmetric coupling") != std::string::npos);
    CHECK(e.field() == "/couplings_cm1/0/1");
  }
}

TEST_CASE("round-off asymmetry is averaged") {
  const char* text = R"({"sites": [{"label": "s1", "type": "a", "layer": "stromal"},
                                    {"label": "s2", "type": "a", "layer": "stromal"}],
                         "energies_cm1": [0, 0], "couplings_cm1": [[0, 100.0000000001], [100, 0]]})";
  const SiteGraph g = parse_site_graph(text);
  CHECK(g.couplings()(0, 1) == g.couplings()(1, 0));
}

TEST_CASE("parse errors carry line and field") {
  const char* broken = "{\n  \"sites\": [\n    {\"label\": \"s1\",, }\n  ]\n}";
  try {
    parse_site_graph(broken);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  const char* unknown = R"({"sites": [{"label": "s1", "type": "a", "layer": "stromal", "colour": 1}],
                            "energies_cm1": [0], "couplings_cm1": [[0]]})";
  try {
    parse_site_graph(unknown);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.field() == "/sites/0/colour");
  }
  const char* bad_type = R"({"sites": [{"label": "s1", "type": "c", "layer": "stromal"}],
                             "energies_cm1": [0], "couplings_cm1": [[0]]})";
  CHECK_THROWS_AS(parse_site_graph(bad_type), ParseError);
  const char* short_energies = R"({"sites": [{"label": "s1", "type": "a", "layer": "stromal"}],
                                   "energies_cm1": [], "couplings_cm1": [[0]]})";
  CHECK_THROWS_AS(parse_site_graph(short_energies), ParseError);
}

TEST_CASE("graph invariants") {
  Eigen::MatrixXd v(2, 2);
  v << 0, 1, 2, 0;
  CHECK_THROWS_AS(make_graph(Eigen::Vector2d(0, 0), v), ValidationError);
  v << 1, 0, 0, 0;
  CHECK_THROWS_AS(make_graph(Eigen::Vector2d(0, 0), v), ValidationError);
  auto meta = plain_meta(2);
  meta[1].label = "s1";
  CHECK_THROWS_AS(SiteGraph(Eigen::Vector2d(0, 0), Eigen::Matrix2d::Zero(), meta), ValidationError);
}

TEST_CASE("LHCII template layout") {
  const SiteGraph g = load_graph("lhcii_template");
  CHECK(g.n_sites() == 14);
  const auto n_a = std::count_if(g.meta().begin(), g.meta().end(), [](const SiteMeta& m) { return m.chl_type == ChlType::a; });
  CHECK(n_a == 8);
  CHECK(g.n_sites() - n_a == 6);
  for (const char* label : {"b601", "a602", "a603", "a604", "b605", "b606", "b607", "b608", "b609", "a610", "a611",
                            "a612", "a613", "a614"})
    CHECK(g.find(label).has_value());
}

TEST_CASE("oligomer assembly") {
  const SiteGraph mono = parse_site_graph(two_site);

  SUBCASE("chain dimer with one link") {
    const SiteGraph d = assemble_oligomer(mono, {2, Topology::chain, {{"s1", "s2", 42.0}}});
    REQUIRE(d.n_sites() == 4);
    CHECK(d.couplings()(0, 3) == 42.0);
    CHECK(count_cross_block(d, 2, 42.0) == 1);
    CHECK(d.meta(0).label == "s1_0");
    CHECK(d.meta(3).label == "s2_1");
    CHECK(d.meta(3).monomer_index == 1);
    CHECK(d.n_monomers() == 2);
  }

  SUBCASE("labels are suffixed for a single monomer") {
    const SiteGraph m = assemble_oligomer(mono, {});
    CHECK(m.meta(0).label == "s1_0");
    CHECK(m.hamiltonian() == mono.hamiltonian());
  }

  SUBCASE("trimer rings on the 14-site layout") {
    const SiteGraph m14 = load_graph("lhcii_template");
    const SiteGraph one = assemble_oligomer(m14, {3, Topology::ring, {{"b601", "b609", 42.0}}});
    CHECK(one.n_sites() == 42);
    CHECK(count_cross_block(one, 14, 42.0) == 3);
    const SiteGraph two =
        assemble_oligomer(m14, {3, Topology::ring, {{"b601", "b609", 42.0}, {"b601", "b608", 42.0}}});
    CHECK(count_cross_block(two, 14, 42.0) == 6);
    // H_12, H_23, H_31: donor on monomer i, acceptor on monomer i+1 mod 3.
    for (int i = 0; i < 3; ++i) {
      const int d = one.index_of(oligomer_label("b601", i));
      const int a = one.index_of(oligomer_label("b609", (i + 1) % 3));
      CHECK(one.couplings()(d, a) == 42.0);
    }
  }

  SUBCASE("ring bonds") {
    CHECK(oligomer_bonds({4, Topology::ring, {}}).size() == 4);
    CHECK(oligomer_bonds({4, Topology::chain, {}}).size() == 3);
    CHECK(oligomer_bonds({2, Topology::ring, {}}).size() == 1);
    CHECK(oligomer_bonds({1, Topology::ring, {}}).empty());
  }

  SUBCASE("monomer blocks preserved") {
    const SiteGraph toy = load_graph("lhcii_toy");
    const SiteGraph tet = assemble_oligomer(toy, {4, Topology::ring, {{"b601", "b609", 42.0}}});
    const int n = toy.n_sites();
    for (int b = 0; b < 4; ++b) CHECK(tet.hamiltonian().block(b * n, b * n, n, n) == toy.hamiltonian());
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(assemble_oligomer(mono, {0, Topology::ring, {}}), ValidationError);
    CHECK_THROWS_AS(assemble_oligomer(mono, {2, Topology::chain, {{"s1", "s9", 1.0}}}), ValidationError);
    CHECK_THROWS_AS(assemble_oligomer(mono, {2, Topology::chain, {{"s1", "s2", std::nan("")}}}), ValidationError);
  }
}

TEST_CASE("spectrum") {
  SUBCASE("single site") {
    const Spectrum s = spectrum(make_graph(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Zero(1, 1)));
    CHECK(s.energies(0) == 0.0);
    CHECK(s.vectors(0, 0) == doctest::Approx(1.0));
  }
  SUBCASE("degenerate dimer") {
    const Spectrum s = spectrum(load_graph("dimer_degenerate"));
    CHECK(s.energies(0) == doctest::Approx(-100.0).epsilon(1e-12));
    CHECK(s.energies(1) == doctest::Approx(100.0).epsilon(1e-12));
    const double r = 1.0 / std::sqrt(2.0);
    // |E_1> = (|1> - |2>)/sqrt2 and |E_2> = (|1> + |2>)/sqrt2 up to sign.
    CHECK(std::abs(s.vectors(0, 0)) == doctest::Approx(r));
    CHECK(s.vectors(0, 0) * s.vectors(1, 0) == doctest::Approx(-0.5));
    CHECK(s.vectors(0, 1) * s.vectors(1, 1) == doctest::Approx(0.5));
  }
  SUBCASE("orthonormal, ascending, trace identity, permutation invariant") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
      const SiteGraph g = random_graph(9, rng);
      const Spectrum s = spectrum(g);
      CHECK((s.vectors.transpose() * s.vectors - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-10);
      for (int k = 1; k < 9; ++k) CHECK(s.energies(k) >= s.energies(k - 1));
      CHECK(std::abs(s.energies.sum() - g.energies().sum()) <= 1e-8 * std::max(1.0, g.energies().cwiseAbs().sum()));

      std::vector<int> perm(9);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      Eigen::VectorXd pe(9);
      Eigen::MatrixXd pv(9, 9);
      for (int i = 0; i < 9; ++i) {
        pe(i) = g.energies()(perm[static_cast<std::size_t>(i)]);
        for (int j = 0; j < 9; ++j) pv(i, j) = g.couplings()(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
      }
      const Spectrum ps = spectrum(make_graph(pe, pv));
      CHECK((ps.energies - s.energies).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("level spacing") {
  const LevelSpacing ls = level_spacing(Eigen::Vector4d(0, 4, 10, 30));
  CHECK(ls.min == 4.0);
  CHECK(ls.max == 20.0);
  CHECK(ls.mean == doctest::Approx(10.0));
}

TEST_CASE("static disorder") {
  const SiteGraph g = load_graph("funnel3");
  SUBCASE("sigma zero is the identity") {
    for (std::uint64_t seed : {0ULL, 1ULL, 123456789ULL}) {
      const SiteGraph d = sample_disorder(g, {0.0, 3, seed}, 2);
      CHECK(d.energies() == g.energies());
      CHECK(d.couplings() == g.couplings());
    }
  }
  SUBCASE("deterministic per (seed, index)") {
    const DisorderSpec spec{50.0, 10, 99};
    const SiteGraph a = sample_disorder(g, spec, 4);
    const SiteGraph b = sample_disorder(g, spec, 4);
    CHECK(a.energies() == b.energies());
    CHECK(a.couplings() == g.couplings());
    CHECK(sample_disorder(g, spec, 5).energies() != a.energies());
    CHECK(sample_disorder(g, {50.0, 10, 100}, 4).energies() != a.energies());
  }
  SUBCASE("population statistics") {
    const int n = 10000;
    const DisorderSpec spec{50.0, n, 2024};
    double sum = 0.0, sq = 0.0;
    for (int r = 0; r < n; ++r) {
      const double x = sample_disorder(g, spec, r).energies()(0);
      sum += x;
      sq += x * x;
    }
    const double mean = sum / n;
    const double sd = std::sqrt((sq - n * mean * mean) / (n - 1));
    CHECK(std::abs(mean - g.energies()(0)) < 3.0 * 50.0 / 100.0);
    CHECK(std::abs(sd - 50.0) < 0.05 * 50.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(sample_disorder(g, {-1.0, 1, 0}, 0), ValidationError);
    CHECK_THROWS_AS(sample_disorder(g, {1.0, 0, 0}, 0), ValidationError);
    CHECK_THROWS_AS(sample_disorder(g, {1.0, 2, 0}, 2), ValidationError);
  }
}
