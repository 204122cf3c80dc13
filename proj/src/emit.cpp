#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ncs/cli.hpp"

namespace ncs {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* kind_name(FieldKind k) { return k == FieldKind::Wigner ? "wigner" : "husimi"; }

}  // namespace

void write_field(const Field& field, std::ostream& os, Format format, const nlohmann::json& metadata) {
    const GridSpec& g = field.grid;
    if (format == Format::Csv) {
        os << "q,p,value\n";
        for (std::size_t i = 0; i < g.nq; ++i)
            for (std::size_t j = 0; j < g.np; ++j)
                os << g17(g.q(i)) << ',' << g17(g.p(j)) << ','
                   << g17(field.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
        return;
    }
    nlohmann::json j;
    j["kind"] = kind_name(field.kind);
    j["grid"] = {{"q_min", g.q_min}, {"q_max", g.q_max}, {"p_min", g.p_min},
                 {"p_max", g.p_max}, {"nq", g.nq},       {"np", g.np}};
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < g.nq; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t jj = 0; jj < g.np; ++jj)
            row.push_back(field.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(jj)));
        rows.push_back(std::move(row));
    }
    j["values"] = std::move(rows);
    nlohmann::json meta = metadata.is_null() ? nlohmann::json::object() : metadata;
    if (!meta.contains("version")) meta["version"] = kVersion;
    j["metadata"] = std::move(meta);
    os << j.dump() << '\n';
}

void emit_field(const Field& field, const std::string& path, Format format, const nlohmann::json& metadata) {
    if (path.empty() || path == "-") {
        write_field(field, std::cout, format, metadata);
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) raise(ErrorKind::IoFailure, "cannot open " + path + " for writing");
    write_field(field, os, format, metadata);
    if (!os) raise(ErrorKind::IoFailure, "write to " + path + " failed");
}

Field parse_field_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorKind::IoFailure, std::string("field JSON does not parse: ") + e.what());
    }
    Field f;
    const auto& g = j.at("grid");
    f.grid.q_min = g.at("q_min").get<double>();
    f.grid.q_max = g.at("q_max").get<double>();
    f.grid.p_min = g.at("p_min").get<double>();
    f.grid.p_max = g.at("p_max").get<double>();
    f.grid.nq = g.at("nq").get<std::size_t>();
    f.grid.np = g.at("np").get<std::size_t>();
    f.kind = j.at("kind").get<std::string>() == "wigner" ? FieldKind::Wigner : FieldKind::Husimi;
    f.values.resize(static_cast<Eigen::Index>(f.grid.nq), static_cast<Eigen::Index>(f.grid.np));
    const auto& rows = j.at("values");
    for (std::size_t i = 0; i < f.grid.nq; ++i)
        for (std::size_t jj = 0; jj < f.grid.np; ++jj)
            f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(jj)) = rows.at(i).at(jj).get<double>();
    return f;
}

}  // namespace ncs
