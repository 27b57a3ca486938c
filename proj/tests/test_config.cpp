#include <doctest.h>

#include <stdexcept>
#include "qsdecay/config.hpp"

using namespace qsdecay;

namespace {

const char* kBase = R"(
# comment line
[barrier]
u0 = 3.0
a = 0.0
b = 3.0

[state]
e0 = 1.217

[field]
amplitude = 0.12   # inline comment
omega = 0.1
envelope = monochromatic

[run]
engine = itm

[numerics]
threads = 2
)";

}  // namespace

TEST_CASE("sectioned key=value parsing with comments") {
  const ConfigMap cfg = parse_config_text(kBase, "base.cfg");
  CHECK(cfg.get("barrier.u0", "") == "3.0");
  CHECK(cfg.get_num("field.amplitude", 0) == doctest::Approx(0.12));
  CHECK(cfg.get_int("numerics.threads", 1) == 2);

  const RunConfig rc = make_run_config(cfg);
  CHECK(rc.barrier.b == 3.0);
  CHECK(rc.state_energy == doctest::Approx(1.217));
  CHECK_FALSE(rc.state_auto);
  CHECK(rc.engine == Engine::Itm);
  CHECK(rc.field.envelope == Envelope::Monochromatic);
  CHECK(rc.itm.threads == 2);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_config_text("[barrier]\nu0 = 3\nnot a pair\n", "bad.cfg");
    FAIL("expected parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("bad.cfg:3") != std::string::npos);
  }
  try {
    parse_config_text("[unterminated\n", "bad2.cfg");
    FAIL("expected parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("bad2.cfg:1") != std::string::npos);
  }
  // non-numeric value surfaces with the key name
  ConfigMap cfg = parse_config_text("[field]\namplitude = strong\n", "bad3.cfg");
  CHECK_THROWS_WITH_AS(make_run_config(cfg), doctest::Contains("field.amplitude"),
                       std::runtime_error);
}

TEST_CASE("overrides replace config values") {
  ConfigMap cfg = parse_config_text(kBase, "base.cfg");
  apply_override(cfg, "field.amplitude=0.05");
  apply_override(cfg, "run.engine = tdse");
  const RunConfig rc = make_run_config(cfg);
  CHECK(rc.field.amplitude == doctest::Approx(0.05));
  CHECK(rc.engine == Engine::Tdse);
  CHECK_THROWS(apply_override(cfg, "no-equals-sign"));
}

TEST_CASE("state auto and physical validation") {
  ConfigMap cfg = parse_config_text(kBase, "base.cfg");
  apply_override(cfg, "state.e0=auto");
  CHECK(make_run_config(cfg).state_auto);

  apply_override(cfg, "state.e0=5.0");  // above the barrier
  CHECK_THROWS(make_run_config(cfg));

  apply_override(cfg, "state.e0=1.0");
  apply_override(cfg, "field.envelope=sin2");
  apply_override(cfg, "field.n_cycles=0");
  CHECK_THROWS(make_run_config(cfg));
}
