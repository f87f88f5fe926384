#include <sstream>
#include <string>

#include "diffwave/errors.hpp"
#include "diffwave/waves.hpp"

namespace diffwave {

namespace {

constexpr const char* kMagic = "diffwave-profile v1";

WaveRegime parse_regime(const std::string& name) {
  for (auto r : {WaveRegime::gaussian_linear, WaveRegime::dirichlet_parabolic,
                 WaveRegime::neumann_selfsimilar, WaveRegime::constant}) {
    if (name == to_string(r)) return r;
  }
  throw std::invalid_argument("unknown wave regime '" + name + "'");
}

std::string join_numbers(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += io::format_double(xs[i]);
  }
  return out;
}

std::vector<double> split_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  return out;
}

}  // namespace

io::Table export_profile(const WaveProfile& profile) {
  if (!profile.law().is_gamma_law()) {
    throw UnsupportedError("only gamma-law wave profiles can be exported");
  }
  io::Table t;
  t.magic = kMagic;
  auto put = [&](const std::string& k, double v) { t.params.emplace_back(k, io::format_double(v)); };
  t.params.emplace_back("regime", to_string(profile.regime()));
  put("gamma", profile.law().gamma());
  put("alpha", profile.schedule().alpha());
  put("lambda", profile.schedule().lambda());
  put("v_plus", profile.far_field().v_plus);
  put("u_plus", profile.far_field().u_plus);
  put("kappa", profile.far_field().kappa);
  switch (profile.regime()) {
    case WaveRegime::constant:
      break;
    case WaveRegime::gaussian_linear:
      put("delta0", profile.gaussian_payload()->delta0);
      break;
    case WaveRegime::neumann_selfsimilar: {
      const auto& tab = *profile.selfsimilar_payload();
      put("v_boundary", tab.v_boundary);
      put("xi_max", tab.xi_max);
      put("initial_slope", tab.initial_slope);
      t.params.emplace_back("columns", "xi phi dphi");
      const std::size_t n = tab.phi.size() - 1;
      std::vector<double> xi(n + 1);
      for (std::size_t j = 0; j <= n; ++j) xi[j] = tab.xi_max * static_cast<double>(j) / static_cast<double>(n);
      t.columns = {xi, tab.phi, tab.dphi};
      break;
    }
    case WaveRegime::dirichlet_parabolic: {
      const auto& st = *profile.stack_payload();
      put("length", st.grid.length);
      t.params.emplace_back("cells", std::to_string(st.grid.cells));
      t.params.emplace_back("times", join_numbers(st.times));
      t.params.emplace_back("columns", "x vbar(t_0) vbar(t_1) ...");
      t.columns.push_back(st.grid.centers());
      for (const auto& v : st.values) t.columns.push_back(v);
      break;
    }
  }
  return t;
}

WaveProfile import_profile(const io::Table& table) {
  if (table.magic != kMagic) {
    throw std::invalid_argument("not a wave profile (expected '# " + std::string(kMagic) + "')");
  }
  const auto law = PressureLaw::gamma_law(table.number("gamma"));
  const DampingSchedule sched(table.number("alpha"), table.number("lambda"));
  FarFieldState ff;
  ff.v_plus = table.number("v_plus");
  ff.u_plus = table.number("u_plus");
  ff.kappa = table.number("kappa");
  switch (parse_regime(table.param("regime"))) {
    case WaveRegime::constant:
      return WaveProfile::constant(ff, law, sched);
    case WaveRegime::gaussian_linear:
      return WaveProfile::gaussian(ff, law, sched, table.number("delta0"));
    case WaveRegime::neumann_selfsimilar: {
      if (table.columns.size() != 3) throw std::invalid_argument("self-similar profile needs 3 columns");
      WaveProfile::SelfSimilar tab;
      tab.v_boundary = table.number("v_boundary");
      tab.xi_max = table.number("xi_max");
      tab.initial_slope = table.number("initial_slope");
      tab.phi = table.columns[1];
      tab.dphi = table.columns[2];
      return WaveProfile::from_table(ff, law, sched, std::move(tab));
    }
    case WaveRegime::dirichlet_parabolic: {
      WaveProfile::Stack st;
      st.grid = Grid1D::make(table.number("length"), std::stoul(table.param("cells")));
      st.times = split_numbers(table.param("times"));
      if (table.columns.size() != st.times.size() + 1) {
        throw std::invalid_argument("parabolic profile: one column per snapshot time expected");
      }
      st.values.assign(table.columns.begin() + 1, table.columns.end());
      return WaveProfile::from_stack(ff, law, sched, std::move(st));
    }
  }
  throw std::invalid_argument("unreachable wave regime");
}

void save_profile(const std::filesystem::path& path, const WaveProfile& profile) {
  io::write_table(path, export_profile(profile));
}

WaveProfile load_profile(const std::filesystem::path& path) {
  return import_profile(io::read_table(path));
}

}  // namespace diffwave
