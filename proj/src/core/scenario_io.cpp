#include "scenario_io.hpp"

#include "io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace msdiff {

namespace {

struct KeyValue {
    std::string value;
    int line = 0;
    bool used = false;
};

[[noreturn]] void parse_fail(int line, const std::string& message) {
    raise(ErrorCode::Parse, "line " + std::to_string(line) + ": " + message);
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double to_double(const KeyValue& kv, const std::string& key) {
    try {
        size_t consumed = 0;
        const double v = std::stod(kv.value, &consumed);
        if (consumed != kv.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        parse_fail(kv.line, key + " expects a number, got '" + kv.value + "'");
    }
}

long to_integer(const KeyValue& kv, const std::string& key) {
    try {
        size_t consumed = 0;
        const long v = std::stol(kv.value, &consumed);
        if (consumed != kv.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        parse_fail(kv.line, key + " expects an integer, got '" + kv.value + "'");
    }
}

std::vector<double> to_double_list(const KeyValue& kv, const std::string& key) {
    std::vector<double> values;
    std::stringstream stream(kv.value);
    std::string item;
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (item.empty()) parse_fail(kv.line, key + " has an empty list entry");
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            parse_fail(kv.line, key + " expects numbers, got '" + item + "'");
        }
    }
    if (values.empty()) parse_fail(kv.line, key + " expects a comma-separated list");
    return values;
}

Matrix load_custom_table(const std::string& path, int cells, int n, int line) {
    std::ifstream in(path);
    if (!in) parse_fail(line, "initial.table_file: cannot open '" + path + "'");
    Matrix table(cells, n);
    std::string row;
    int k = 0;
    while (std::getline(in, row)) {
        row = trim(row);
        if (row.empty() || row[0] == '#') continue;
        if (k >= cells) parse_fail(line, "initial.table_file has more rows than grid cells");
        std::stringstream stream(row);
        std::string item;
        std::vector<double> fields;
        while (std::getline(stream, item, ',')) fields.push_back(std::stod(trim(item)));
        // an optional leading x column is tolerated and ignored
        if (static_cast<int>(fields.size()) == n + 1) fields.erase(fields.begin());
        if (static_cast<int>(fields.size()) != n)
            parse_fail(line, "initial.table_file row " + std::to_string(k) + " has " +
                                 std::to_string(fields.size()) + " fields, expected " +
                                 std::to_string(n));
        for (int i = 0; i < n; ++i) table(k, i) = fields[i];
        ++k;
    }
    if (k != cells)
        parse_fail(line, "initial.table_file has " + std::to_string(k) + " rows, expected " +
                             std::to_string(cells));
    return table;
}

} // namespace

Scenario parse_scenario(const std::string& text, const std::string& base_dir) {
    std::map<std::string, KeyValue> entries;
    {
        std::stringstream stream(text);
        std::string raw;
        int line = 0;
        while (std::getline(stream, raw)) {
            ++line;
            const auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            raw = trim(raw);
            if (raw.empty()) continue;
            const auto eq = raw.find('=');
            if (eq == std::string::npos) parse_fail(line, "expected 'key = value'");
            const std::string key = trim(raw.substr(0, eq));
            const std::string value = trim(raw.substr(eq + 1));
            if (key.empty() || value.empty()) parse_fail(line, "expected 'key = value'");
            if (entries.count(key)) parse_fail(line, "duplicate key '" + key + "'");
            entries[key] = KeyValue{value, line, false};
        }
    }

    auto take = [&entries](const std::string& key) -> KeyValue* {
        auto it = entries.find(key);
        if (it == entries.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    };
    auto require = [&take](const std::string& key) -> KeyValue& {
        KeyValue* kv = take(key);
        if (!kv) raise(ErrorCode::Parse, "missing required key '" + key + "'");
        return *kv;
    };

    Scenario sc;

    const long cells = to_integer(require("grid.cells"), "grid.cells");
    const double length = to_double(require("grid.length"), "grid.length");
    if (cells < 2) raise(ErrorCode::Parse, "grid.cells must be at least 2");
    if (cells > 1'000'000) raise(ErrorCode::Parse, "grid.cells is implausibly large");
    sc.grid = Grid1D(static_cast<int>(cells), length);

    const long species = to_integer(require("species"), "species");
    if (species < 2 || species > 16)
        raise(ErrorCode::Parse, "species must lie in [2, 16]");
    sc.n_species = static_cast<int>(species);

    Matrix d = Matrix::Zero(sc.n_species, sc.n_species);
    for (int i = 1; i <= sc.n_species; ++i) {
        for (int j = 1; j <= sc.n_species; ++j) {
            if (i == j) continue;
            const std::string key = "d." + std::to_string(i) + "." + std::to_string(j);
            KeyValue* kv = take(key);
            if (!kv) continue;
            const double value = to_double(*kv, key);
            if (!(value > 0.0)) parse_fail(kv->line, key + " must be positive");
            if (d(i - 1, j - 1) != 0.0 && d(i - 1, j - 1) != value)
                parse_fail(kv->line, key + " conflicts with its symmetric partner (matrix must be symmetric)");
            d(i - 1, j - 1) = value;
            d(j - 1, i - 1) = value;
        }
    }
    for (int i = 0; i < sc.n_species; ++i)
        for (int j = i + 1; j < sc.n_species; ++j)
            if (d(i, j) == 0.0)
                raise(ErrorCode::Parse, "missing diffusivity d." + std::to_string(i + 1) + "." +
                                            std::to_string(j + 1));
    sc.d = BinaryDiffusivities(std::move(d));

    const KeyValue& t_end = require("t_end");
    sc.t_end = to_double(t_end, "t_end");
    if (sc.t_end < 0.0) parse_fail(t_end.line, "t_end must be nonnegative");

    if (KeyValue* kv = take("cfl")) {
        sc.cfl = to_double(*kv, "cfl");
        if (!(sc.cfl > 0.0 && sc.cfl <= 1.0)) parse_fail(kv->line, "cfl must lie in (0, 1]");
    }
    if (KeyValue* kv = take("integrator")) {
        if (kv->value == "euler") sc.integrator = Integrator::Euler;
        else if (kv->value == "heun") sc.integrator = Integrator::Heun;
        else parse_fail(kv->line, "integrator must be 'euler' or 'heun'");
    }
    if (KeyValue* kv = take("output_stride")) {
        const long stride = to_integer(*kv, "output_stride");
        if (stride < 0) parse_fail(kv->line, "output_stride must be nonnegative (0 = auto)");
        sc.output_stride = static_cast<int>(stride);
    }
    if (KeyValue* kv = take("flux_truncation")) {
        sc.flux_truncation = to_double(*kv, "flux_truncation");
        if (sc.flux_truncation < 0.0 || sc.flux_truncation >= 1.0)
            parse_fail(kv->line, "flux_truncation must lie in [0, 1)");
    }

    const KeyValue& preset = require("initial.preset");
    if (preset.value == "cosine_perturbation") {
        sc.initial.kind = PresetKind::CosinePerturbation;
        sc.initial.amplitudes =
            to_double_list(require("initial.amplitudes"), "initial.amplitudes");
    } else if (preset.value == "smoothed_step") {
        sc.initial.kind = PresetKind::SmoothedStep;
    } else if (preset.value == "duncan_toor") {
        sc.initial.kind = PresetKind::DuncanToor;
    } else if (preset.value == "custom") {
        sc.initial.kind = PresetKind::Custom;
        const KeyValue& table = require("initial.table_file");
        std::string path = table.value;
        if (!path.empty() && path[0] != '/') path = base_dir + "/" + path;
        sc.initial.table = load_custom_table(path, sc.grid.num_cells, sc.n_species, table.line);
    } else {
        parse_fail(preset.line, "unknown initial.preset '" + preset.value + "'");
    }

    if (KeyValue* kv = take("initial.interface_width")) {
        sc.initial.interface_width = to_double(*kv, "initial.interface_width");
        if (!(sc.initial.interface_width > 0.0))
            parse_fail(kv->line, "initial.interface_width must be positive");
    } else if (sc.initial.kind == PresetKind::SmoothedStep ||
               sc.initial.kind == PresetKind::DuncanToor) {
        // materialize the default so derived (refined) scenarios keep the
        // same physical interface
        sc.initial.interface_width = 2.0 * sc.grid.dx;
    }

    for (const auto& [key, kv] : entries)
        if (!kv.used) parse_fail(kv.line, "unknown key '" + key + "'");

    // Preset parameters must produce valid initial data; surface that at
    // parse time rather than at the first simulate call.
    initial_state(sc);
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::Io, "cannot open scenario file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto slash = path.find_last_of('/');
    const std::string base_dir = slash == std::string::npos ? "." : path.substr(0, slash);
    return parse_scenario(buffer.str(), base_dir);
}

std::string scenario_to_text(const Scenario& sc, const std::string& custom_table_path) {
    std::ostringstream out;
    out << "grid.cells = " << sc.grid.num_cells << "\n";
    out << "grid.length = " << format_g17(sc.grid.domain_length) << "\n";
    out << "species = " << sc.n_species << "\n";
    for (int i = 0; i < sc.n_species; ++i)
        for (int j = i + 1; j < sc.n_species; ++j)
            out << "d." << i + 1 << "." << j + 1 << " = " << format_g17(sc.d(i, j)) << "\n";
    out << "t_end = " << format_g17(sc.t_end) << "\n";
    out << "cfl = " << format_g17(sc.cfl) << "\n";
    out << "integrator = " << (sc.integrator == Integrator::Euler ? "euler" : "heun") << "\n";
    out << "output_stride = " << sc.output_stride << "\n";
    if (sc.flux_truncation != 0.0)
        out << "flux_truncation = " << format_g17(sc.flux_truncation) << "\n";
    switch (sc.initial.kind) {
        case PresetKind::CosinePerturbation: {
            out << "initial.preset = cosine_perturbation\n";
            out << "initial.amplitudes = ";
            for (size_t i = 0; i < sc.initial.amplitudes.size(); ++i)
                out << (i ? ", " : "") << format_g17(sc.initial.amplitudes[i]);
            out << "\n";
            break;
        }
        case PresetKind::SmoothedStep: out << "initial.preset = smoothed_step\n"; break;
        case PresetKind::DuncanToor: out << "initial.preset = duncan_toor\n"; break;
        case PresetKind::Custom:
            if (custom_table_path.empty())
                raise(ErrorCode::Config,
                      "custom scenarios serialize only with a table file reference");
            out << "initial.preset = custom\n";
            out << "initial.table_file = " << custom_table_path << "\n";
            break;
    }
    if (sc.initial.interface_width > 0.0 && sc.initial.kind != PresetKind::CosinePerturbation)
        out << "initial.interface_width = " << format_g17(sc.initial.interface_width) << "\n";
    return out.str();
}

} // namespace msdiff
