#pragma once

#include "kssim/diagnostics.hpp"
#include "kssim/grid.hpp"
#include "kssim/model.hpp"
#include "kssim/stepper.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace kssim {

/// A value from the config text: number, string, bool, or a flat array of numbers.
using ConfigValue = std::variant<double, std::string, bool, std::vector<double>>;

/// Ordered `[section]` / `key = value` document. Supports the TOML subset the
/// simulator needs: bare or quoted keys, numbers, basic strings, booleans,
/// single-line numeric arrays and `#` comments.
struct ConfigDocument {
    struct Entry {
        std::string key;
        ConfigValue value;
        int line = 0;
    };
    struct Section {
        std::string name;
        std::vector<Entry> entries;
    };
    std::vector<Section> sections;

    static ConfigDocument parse(std::istream& is);
    static ConfigDocument parse_string(const std::string& text);
    static ConfigDocument load(const std::string& path);

    const Section* find(const std::string& name) const;
};

struct SweepAxis {
    std::string name;  ///< e.g. "source.lambda", "initial.mass", "motility.chi"
    std::vector<double> values;
};

struct RunConfig {
    std::string name = "custom";
    Grid grid = Grid::line(8.0, 256);
    MotilitySpec motility = MotilitySpec::exp_decay(1.0);
    SourceSpec source = SourceSpec::log_power(1.0, 1.0, 0.0);
    InitialConditionSpec initial = InitialConditionSpec::gaussian({4.0, 0.0}, 0.5, 5.0, 0.0);
    /// When set, rescales the IC (Gaussian amplitude, or the constant level) so ∫u_in equals it.
    std::optional<double> initial_mass;
    StepConfig step;
    double horizon = 50.0;
    std::uint64_t seed = 0;
    std::vector<double> snapshot_times;
    bool comparison = true;
    long max_steps = 0;
    ClassifierConfig classifier;
    double bound_tol = 0.05;
    double domination_tol = 0.02;
    std::vector<SweepAxis> sweep;
    int max_runs = 64;

    /// Throws ConfigError naming the offending key.
    void validate() const;
    /// The initial condition after applying `seed` and `initial_mass`.
    InitialConditionSpec resolved_initial() const;
};

/// Builds a RunConfig from a document; unknown sections or keys are errors.
/// A `[preset] name = "..."` entry starts from that preset and overrides it.
RunConfig config_from_document(const ConfigDocument& doc);
RunConfig load_config(const std::string& path);

/// Writes the fully resolved config in the same format; parsing it back yields an equal config.
void write_config(const RunConfig& cfg, std::ostream& os);
std::string config_to_string(const RunConfig& cfg);

/// Sets one sweepable parameter by its dotted name. Throws ConfigError for unknown names.
void apply_axis(RunConfig& cfg, const std::string& name, double value);

std::vector<std::string> preset_names();
/// Throws ConfigError for unknown names.
RunConfig preset(const std::string& name);
std::string preset_description(const std::string& name);

}  // namespace kssim
