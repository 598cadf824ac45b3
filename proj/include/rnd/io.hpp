#pragma once

// Output formats: CSV with a '#'-prefixed metadata header and 17 significant
// digits, plus JSON documents for structured results.

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rnd/fullwave.hpp"
#include "rnd/layer.hpp"
#include "rnd/melnikov.hpp"
#include "rnd/model.hpp"
#include "rnd/reduced.hpp"

namespace rnd::io {

using Meta = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double x);  // %.17g

// "# key: value" lines; the first line always carries the parameter object.
void write_header(std::ostream& os, const ModelParams& p, const Meta& extra = {});

void write_profile_csv(std::ostream& os, const WaveProfile& w);
void write_layer_branch_csv(std::ostream& os, const std::vector<BranchPoint>& pts,
                            const ModelParams& p, Direction dir);
// param,c,kind,residual
void write_continuation_csv(std::ostream& os, const ContinuationResult& r, const std::string& vary,
                            const ModelParams& p);

nlohmann::json to_json(const SlowArc& arc);
nlohmann::json to_json(const ShockRule& s);
nlohmann::json to_json(const SingularHeteroclinic& h);
nlohmann::json to_json(const MelnikovResult& m);
nlohmann::json to_json(const LayerOrbit& o);

// Reads a JSON document; throws ConfigError on I/O or parse failure.
nlohmann::json read_json_file(const std::string& path);

// Creates `dir` if needed and opens dir/name for writing. Throws ConfigError.
void write_file(const std::string& dir, const std::string& name,
                const std::function<void(std::ostream&)>& body);

}  // namespace rnd::io
