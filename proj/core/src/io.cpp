#include "memsat/io.hpp"

#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>

#include "memsat/error.hpp"

namespace memsat {

std::string run_record_json(const RunRecord& rec) {
  nlohmann::json j{{"solved", rec.solved},
                   {"steps", rec.steps},
                   {"rejected_steps", rec.rejected_steps},
                   {"integrated_time", rec.integrated_time},
                   {"wall_time", rec.wall_time},
                   {"max_xl_seen", rec.max_xl_seen},
                   {"mean_dt", rec.mean_dt},
                   {"seed", rec.seed}};
  if (rec.assignment) {
    std::vector<long long> lits;
    for (std::size_t i = 0; i < rec.assignment->size(); ++i)
      lits.push_back((*rec.assignment)[i] > 0 ? static_cast<long long>(i + 1) : -static_cast<long long>(i + 1));
    j["assignment"] = lits;
  } else {
    j["assignment"] = nullptr;
  }
  if (!rec.failure.empty()) j["failure"] = rec.failure;
  return j.dump();
}

std::map<std::string, double> parse_params_json(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "params file must hold a JSON object");
    return j.get<std::map<std::string, double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("params file: ") + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace memsat
