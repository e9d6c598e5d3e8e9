#include "su11/state_io.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace su11 {

using nlohmann::json;

TwoModeState read_state(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("state file: malformed JSON: ") + e.what());
  }
  try {
    const int n_max = doc.at("n_max").get<int>();
    TwoModeState state(n_max);
    for (const auto& entry : doc.at("amplitudes")) {
      const int na = entry.at("na").get<int>();
      const int nb = entry.at("nb").get<int>();
      if (na < 0 || nb < 0 || na > n_max || nb > n_max) {
        throw std::runtime_error("state file: occupation (" + std::to_string(na) + "," +
                                 std::to_string(nb) + ") outside n_max");
      }
      state(na, nb) += Complex(entry.value("re", 0.0), entry.value("im", 0.0));
    }
    return state;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("state file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("state file: ") + e.what());
  }
}

TwoModeState read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open state file '" + path + "'");
  return read_state(in);
}

void write_state(std::ostream& out, const TwoModeState& state) {
  json amps = json::array();
  for (int na = 0; na <= state.n_max(); ++na) {
    for (int nb = 0; nb <= state.n_max(); ++nb) {
      const Complex a = state(na, nb);
      if (a == Complex(0.0)) continue;
      amps.push_back({{"na", na}, {"nb", nb}, {"re", a.real()}, {"im", a.imag()}});
    }
  }
  json doc = {{"n_max", state.n_max()}, {"amplitudes", std::move(amps)}};
  out << doc.dump(2) << '\n';
}

void write_state_file(const std::string& path, const TwoModeState& state) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write state file '" + path + "'");
  write_state(out, state);
}

}  // namespace su11
