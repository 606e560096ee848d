#ifndef PLATEAU_IO_HPP
#define PLATEAU_IO_HPP

#include "plateau/energy.hpp"
#include "plateau/homology.hpp"
#include "plateau/scene.hpp"
#include "plateau/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace plateau {

using Json = nlohmann::json;

Json complex_to_json(const CubicalComplex& k);
CubicalComplex complex_from_json(const Json& j);

Json simplicial_to_json(const SimplicialComplex& k);

/// Scene plus the integrand declaration carried by scene files.
struct SceneFile {
    Scene scene;
    std::string i_expr = "1";
    std::string j_expr = "1";
    double lambda = 1;
    /// optional weighted stray clouds for the weak-limit pipeline
    std::vector<MeasuredSet> stray_sequence;

    Integrand integrand() const;
};

Json scene_file_to_json(const SceneFile& sf);
SceneFile scene_file_from_json(const Json& j);
SceneFile parse_scene(const std::string& path);

Json homology_report(const HomologyPresentation& pres);

std::string off_mesh(const CubicalComplex& support, int d);
std::string csv_trace(const std::vector<TraceEntry>& trace);

/// Atomic write: temp file in the same directory, then rename.
void write_text_atomic(const std::string& path, const std::string& content);

struct ExperimentConfig {
    std::string command;    // check, minimize, refine, lemma24, energy-audit, sphere
    std::string scene_path;
    std::uint64_t seed = 0;
    int budget = 400;
    std::string mode = "free"; // free | fixed
    std::string out_dir = ".";
    int levels = 3;
    double tolerance = 1e-9;
};

/// Executes one experiment command; returns the process exit status and
/// writes artifacts (JSON/CSV/OFF) under the output directory. Failures
/// produce a machine-readable error.json and a nonzero status.
int run(const ExperimentConfig& config);

} // namespace plateau

#endif
