#include "uc/caseio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace uc {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Prefer the shortest representation that still round-trips.
    for (int prec = 1; prec <= 16; ++prec) {
        char shorter[32];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

namespace {

double parse_double_field(const json& obj, const std::string& field) {
    const json& v = obj.at(field);
    if (v.is_string() && (v == "inf" || v == "unlimited")) return kUnlimited;
    return v.get<double>();
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw CaseParseError("unknown field '" + key + "' in " + where);
}

UcInstance parse_native_json(const json& doc) {
    reject_unknown(doc, {"horizon", "slack_bus", "buses", "lines", "units", "loads"}, "case");
    UcInstance instance;
    try {
        instance.horizon = doc.at("horizon").get<int>();
        instance.slack_bus = doc.at("slack_bus").get<std::string>();
        for (const auto& b : doc.at("buses")) instance.buses.push_back(b.get<std::string>());

        for (const auto& jl : doc.at("lines")) {
            reject_unknown(jl, {"id", "from", "to", "reactance", "limit"}, "line");
            TransmissionLine line;
            line.id = jl.at("id").get<std::string>();
            line.from_bus = jl.at("from").get<std::string>();
            line.to_bus = jl.at("to").get<std::string>();
            line.reactance = jl.at("reactance").get<double>();
            line.limit = jl.contains("limit") ? parse_double_field(jl, "limit") : kUnlimited;
            instance.lines.push_back(std::move(line));
        }

        for (const auto& ju : doc.at("units")) {
            reject_unknown(ju,
                           {"id", "bus", "p_min", "p_max", "cost_a", "cost_b", "startup_cost",
                            "ramp_up", "ramp_down", "startup_ramp", "shutdown_ramp", "min_up",
                            "min_down", "init_on", "init_duration", "init_power"},
                           "unit");
            GeneratingUnit unit;
            unit.id = ju.at("id").get<std::string>();
            unit.bus = ju.at("bus").get<std::string>();
            unit.p_min = ju.at("p_min").get<double>();
            unit.p_max = ju.at("p_max").get<double>();
            unit.cost_a = ju.at("cost_a").get<double>();
            unit.cost_b = ju.at("cost_b").get<double>();
            if (ju.contains("startup_cost")) unit.startup_cost = ju.at("startup_cost").get<double>();
            if (ju.contains("ramp_up")) unit.ramp_up = parse_double_field(ju, "ramp_up");
            if (ju.contains("ramp_down")) unit.ramp_down = parse_double_field(ju, "ramp_down");
            if (ju.contains("startup_ramp")) unit.startup_ramp = parse_double_field(ju, "startup_ramp");
            if (ju.contains("shutdown_ramp"))
                unit.shutdown_ramp = parse_double_field(ju, "shutdown_ramp");
            if (ju.contains("min_up")) unit.min_up = ju.at("min_up").get<int>();
            if (ju.contains("min_down")) unit.min_down = ju.at("min_down").get<int>();
            if (ju.contains("init_on")) unit.init_on = ju.at("init_on").get<bool>();
            if (ju.contains("init_duration")) unit.init_duration = ju.at("init_duration").get<int>();
            if (ju.contains("init_power")) unit.init_power = ju.at("init_power").get<double>();
            instance.units.push_back(std::move(unit));
        }

        for (const auto& jd : doc.at("loads")) {
            reject_unknown(jd, {"bus", "demand"}, "load");
            LoadProfile load;
            load.bus = jd.at("bus").get<std::string>();
            for (const auto& d : jd.at("demand")) load.demand.push_back(d.get<double>());
            instance.loads.push_back(std::move(load));
        }
    } catch (const json::out_of_range& e) {
        throw CaseParseError(std::string("missing field: ") + e.what());
    } catch (const json::type_error& e) {
        throw CaseParseError(std::string("bad field type: ") + e.what());
    }

    auto problems = validate_instance(instance);
    std::erase_if(problems, [](const std::string& p) { return p.find("warning:") != std::string::npos; });
    if (!problems.empty()) throw CaseParseError("invalid case: " + problems.front());
    return instance;
}

}  // namespace

UcInstance parse_native_case_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw CaseParseError(std::string("syntax error: ") + e.what());
    }
    return parse_native_json(doc);
}

UcInstance parse_native_case(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_native_case_text(buf.str());
}

std::string write_native_case(const UcInstance& instance) {
    json doc;
    doc["horizon"] = instance.horizon;
    doc["slack_bus"] = instance.slack_bus;
    doc["buses"] = instance.buses;
    doc["lines"] = json::array();
    auto num = [](double v) -> json {
        if (std::isinf(v)) return "inf";
        return v;
    };
    for (const auto& line : instance.lines)
        doc["lines"].push_back({{"id", line.id},
                                {"from", line.from_bus},
                                {"to", line.to_bus},
                                {"reactance", line.reactance},
                                {"limit", num(line.limit)}});
    doc["units"] = json::array();
    for (const auto& u : instance.units)
        doc["units"].push_back({{"id", u.id},
                                {"bus", u.bus},
                                {"p_min", u.p_min},
                                {"p_max", u.p_max},
                                {"cost_a", u.cost_a},
                                {"cost_b", u.cost_b},
                                {"startup_cost", u.startup_cost},
                                {"ramp_up", num(u.ramp_up)},
                                {"ramp_down", num(u.ramp_down)},
                                {"startup_ramp", num(u.startup_ramp)},
                                {"shutdown_ramp", num(u.shutdown_ramp)},
                                {"min_up", u.min_up},
                                {"min_down", u.min_down},
                                {"init_on", u.init_on},
                                {"init_duration", u.init_duration},
                                {"init_power", u.init_power}});
    doc["loads"] = json::array();
    for (const auto& load : instance.loads)
        doc["loads"].push_back({{"bus", load.bus}, {"demand", load.demand}});
    return doc.dump(2) + "\n";
}

namespace {

// Reads "mpc.<name> = [ rows ];" into a numeric table.
std::vector<std::vector<double>> read_matpower_table(const std::string& text,
                                                     const std::string& name) {
    auto pos = text.find("mpc." + name);
    if (pos == std::string::npos) throw CaseParseError("missing MATPOWER table: " + name);
    auto open = text.find('[', pos);
    auto close = text.find(']', open);
    if (open == std::string::npos || close == std::string::npos)
        throw CaseParseError("unterminated MATPOWER table: " + name);
    std::string body = text.substr(open + 1, close - open - 1);
    for (char& c : body)
        if (c == ';') c = '\n';
    std::vector<std::vector<double>> table;
    std::istringstream lines(body);
    std::string line;
    while (std::getline(lines, line)) {
        auto comment = line.find('%');
        if (comment != std::string::npos) line.erase(comment);
        std::istringstream fields(line);
        std::vector<double> row;
        double v;
        while (fields >> v) row.push_back(v);
        if (!row.empty()) table.push_back(std::move(row));
    }
    return table;
}

}  // namespace

UcInstance parse_matpower_subset(std::istream& matpower, std::istream& extras_in) {
    std::ostringstream buf;
    buf << matpower.rdbuf();
    const std::string text = buf.str();

    auto bus = read_matpower_table(text, "bus");
    auto gen = read_matpower_table(text, "gen");
    auto branch = read_matpower_table(text, "branch");

    json extras;
    try {
        extras_in >> extras;
    } catch (const json::parse_error& e) {
        throw CaseParseError(std::string("generator extras: ") + e.what());
    }
    const auto& gex = extras.at("generators");
    if (gex.size() != gen.size())
        throw CaseParseError("generator extras row count " + std::to_string(gex.size()) +
                             " != gen rows " + std::to_string(gen.size()));

    UcInstance instance;
    instance.horizon = extras.at("horizon").get<int>();
    std::vector<double> profile(static_cast<std::size_t>(instance.horizon), 1.0);
    if (extras.contains("demand_profile")) {
        profile.clear();
        for (const auto& v : extras.at("demand_profile")) profile.push_back(v.get<double>());
        if (static_cast<int>(profile.size()) != instance.horizon)
            throw CaseParseError("demand_profile length != horizon");
    }

    auto bus_name = [](double id) { return "bus" + std::to_string(static_cast<long>(id)); };
    for (const auto& row : bus) {
        instance.buses.push_back(bus_name(row.at(0)));
        if (static_cast<int>(row.at(1)) == 3) instance.slack_bus = instance.buses.back();
        double pd = row.size() > 2 ? row[2] : 0.0;
        if (pd > 0.0) {
            LoadProfile load;
            load.bus = instance.buses.back();
            for (double f : profile) load.demand.push_back(pd * f);
            instance.loads.push_back(std::move(load));
        }
    }
    if (instance.slack_bus.empty() && !instance.buses.empty())
        instance.slack_bus = instance.buses.front();

    int line_no = 0;
    for (const auto& row : branch) {
        if (row.size() < 6) throw CaseParseError("branch row too short");
        TransmissionLine line;
        line.id = "line" + std::to_string(++line_no);
        line.from_bus = bus_name(row[0]);
        line.to_bus = bus_name(row[1]);
        line.reactance = row[3];
        if (line.reactance == 0.0) throw CaseParseError(line.id + ": zero reactance");
        line.limit = row[5] == 0.0 ? kUnlimited : row[5];  // rateA 0 means unlimited
        instance.lines.push_back(std::move(line));
    }

    for (std::size_t i = 0; i < gen.size(); ++i) {
        const auto& row = gen[i];
        const auto& ex = gex[i];
        GeneratingUnit unit;
        unit.id = ex.contains("id") ? ex.at("id").get<std::string>()
                                    : "gen" + std::to_string(i + 1);
        unit.bus = bus_name(row.at(0));
        unit.p_max = row.size() > 8 ? row[8] : 0.0;
        unit.p_min = row.size() > 9 ? row[9] : 0.0;
        unit.cost_a = ex.at("cost_a").get<double>();
        unit.cost_b = ex.at("cost_b").get<double>();
        unit.startup_cost = ex.at("startup_cost").get<double>();
        unit.ramp_up = ex.at("ramp_up").get<double>();
        unit.ramp_down = ex.at("ramp_down").get<double>();
        unit.startup_ramp = ex.contains("startup_ramp") ? ex.at("startup_ramp").get<double>()
                                                        : std::max(unit.p_min, unit.ramp_up);
        unit.shutdown_ramp = ex.contains("shutdown_ramp") ? ex.at("shutdown_ramp").get<double>()
                                                          : std::max(unit.p_min, unit.ramp_down);
        unit.min_up = ex.at("min_up").get<int>();
        unit.min_down = ex.at("min_down").get<int>();
        unit.init_on = ex.at("init_on").get<bool>();
        unit.init_duration = ex.at("init_duration").get<int>();
        unit.init_power = ex.contains("init_power") ? ex.at("init_power").get<double>() : 0.0;
        instance.units.push_back(std::move(unit));
    }
    return instance;
}

UcInstance apply_scaling(const UcInstance& instance, const ScalingFactors& factors) {
    UcInstance out = instance;
    for (auto& load : out.loads)
        for (double& d : load.demand) d *= factors.s_d;
    for (auto& line : out.lines) line.limit *= factors.s_f;
    for (auto& unit : out.units) {
        auto scale_time = [&](int v) {
            int scaled = static_cast<int>(std::ceil(v * factors.s_m - 1e-9));
            return std::min(out.horizon, std::max(1, scaled));
        };
        unit.min_up = scale_time(unit.min_up);
        unit.min_down = scale_time(unit.min_down);
        unit.ramp_up *= factors.s_r;
        unit.ramp_down *= factors.s_r;
        // Start/stop ramps stay >= p_min so a repaired commitment always
        // admits some dispatch.
        unit.startup_ramp = std::max(unit.p_min, unit.startup_ramp * factors.s_r);
        unit.shutdown_ramp = std::max(unit.p_min, unit.shutdown_ramp * factors.s_r);
    }
    return out;
}

std::string write_schedule(const Schedule& schedule, const std::vector<std::string>& unit_ids,
                           const ScheduleSummary& summary) {
    std::ostringstream out;
    out << "unit,t,z,p\n";
    for (std::size_t i = 0; i < schedule.z.size(); ++i)
        for (std::size_t t = 0; t < schedule.z[i].size(); ++t)
            out << unit_ids[i] << ',' << (t + 1) << ',' << schedule.z[i][t] << ','
                << format_double(schedule.p[i][t]) << '\n';
    out << "# total_cost=" << format_double(summary.cost.total_cost) << '\n';
    out << "# startup_cost=" << format_double(summary.cost.startup_cost) << '\n';
    out << "# fuel_cost=" << format_double(summary.cost.fuel_cost) << '\n';
    out << "# iterations=" << summary.iterations << '\n';
    out << "# violation=" << format_double(summary.violation) << '\n';
    return out.str();
}

ParsedSchedule parse_schedule(std::istream& in) {
    ParsedSchedule out;
    std::string line;
    if (!std::getline(in, line) || line != "unit,t,z,p")
        throw CaseParseError("schedule: missing header");
    std::map<std::string, std::size_t> index;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(2, eq - 2);
            double value = std::strtod(line.c_str() + eq + 1, nullptr);
            if (key == "total_cost") out.summary.cost.total_cost = value;
            else if (key == "startup_cost") out.summary.cost.startup_cost = value;
            else if (key == "fuel_cost") out.summary.cost.fuel_cost = value;
            else if (key == "iterations") out.summary.iterations = static_cast<int>(value);
            else if (key == "violation") out.summary.violation = value;
            continue;
        }
        std::istringstream fields(line);
        std::string unit, t_s, z_s, p_s;
        std::getline(fields, unit, ',');
        std::getline(fields, t_s, ',');
        std::getline(fields, z_s, ',');
        std::getline(fields, p_s, ',');
        auto [it, inserted] = index.try_emplace(unit, out.unit_ids.size());
        if (inserted) {
            out.unit_ids.push_back(unit);
            out.schedule.z.emplace_back();
            out.schedule.p.emplace_back();
        }
        out.schedule.z[it->second].push_back(std::stoi(z_s));
        out.schedule.p[it->second].push_back(std::strtod(p_s.c_str(), nullptr));
    }
    return out;
}

std::string bench_csv_header() {
    return "case,s_d,s_M,s_F,s_R,c0,iterations,feasible,cost,normalized_cost,wall_ms,c0_optimized\n";
}

std::string bench_csv_row(const BenchRow& row) {
    std::ostringstream out;
    out << row.case_name << ',' << format_double(row.factors.s_d) << ','
        << format_double(row.factors.s_m) << ',' << format_double(row.factors.s_f) << ','
        << format_double(row.factors.s_r) << ',' << format_double(row.c0) << ','
        << row.iterations << ',' << (row.feasible ? 1 : 0) << ',' << format_double(row.cost)
        << ',' << format_double(row.normalized_cost) << ',' << format_double(row.wall_ms) << ','
        << (row.c0_optimized ? 1 : 0) << '\n';
    return out.str();
}

}  // namespace uc
