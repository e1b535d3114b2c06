#include "pmuobs/csv.hpp"

#include <cstdio>
#include <fstream>

#include "pmuobs/errors.hpp"

namespace pmuobs {

const std::vector<ColumnDef>& column_registry() {
    static const std::vector<ColumnDef> reg = {
        {"t", &Record::t},
        {"x1", &Record::x1}, {"x2", &Record::x2}, {"x3", &Record::x3}, {"x4", &Record::x4},
        {"u1", &Record::u1}, {"u2", &Record::u2},
        {"y1", &Record::y1}, {"y2", &Record::y2}, {"y3", &Record::y3},
        {"y4", &Record::y4}, {"y5", &Record::y5}, {"y6", &Record::y6},
        {"z0", &Record::z0}, {"Y1", &Record::Y1}, {"Y2", &Record::Y2}, {"Y3", &Record::Y3},
        {"A11", &Record::A11}, {"A12", &Record::A12},
        {"A21", &Record::A21}, {"A22", &Record::A22},
        {"xi1", &Record::xi1}, {"xi2", &Record::xi2},
        {"phi11", &Record::phi11}, {"phi12", &Record::phi12},
        {"phi21", &Record::phi21}, {"phi22", &Record::phi22},
        {"det_phi", &Record::det_phi}, {"cond_phi", &Record::cond_phi},
        {"psi1", &Record::psi1}, {"psi2", &Record::psi2}, {"psi3", &Record::psi3},
        {"psi4", &Record::psi4}, {"psi5", &Record::psi5},
        {"yE", &Record::yE},
        {"f21", &Record::f21}, {"f22", &Record::f22}, {"f23", &Record::f23},
        {"f24", &Record::f24}, {"f25", &Record::f25}, {"f26", &Record::f26},
        {"f31", &Record::f31}, {"f32", &Record::f32}, {"f33", &Record::f33},
        {"f34", &Record::f34}, {"f35", &Record::f35}, {"f36", &Record::f36},
        {"f41", &Record::f41}, {"f42", &Record::f42}, {"f43", &Record::f43},
        {"f44", &Record::f44}, {"f45", &Record::f45}, {"f46", &Record::f46},
        {"f51", &Record::f51}, {"f52", &Record::f52}, {"f53", &Record::f53},
        {"f54", &Record::f54}, {"f55", &Record::f55}, {"f56", &Record::f56},
        {"Delta", &Record::Delta}, {"int_Delta_sq", &Record::int_Delta_sq},
        {"calY1", &Record::calY1}, {"calY2", &Record::calY2}, {"calY3", &Record::calY3},
        {"calY4", &Record::calY4}, {"calY5", &Record::calY5},
        {"mix_dev", &Record::mix_dev}, {"mix_scale", &Record::mix_scale},
        {"th1_hat", &Record::th1_hat}, {"th2_hat", &Record::th2_hat},
        {"thf1", &Record::thf1}, {"thf2", &Record::thf2}, {"thf3", &Record::thf3},
        {"thf4", &Record::thf4}, {"thf5", &Record::thf5},
        {"x1_hat", &Record::x1_hat}, {"x3_hat", &Record::x3_hat}, {"x4_hat", &Record::x4_hat},
        {"x1_err", &Record::x1_err}, {"x3_err", &Record::x3_err}, {"x4_err", &Record::x4_err},
        {"op1", &Record::op1}, {"op2", &Record::op2}, {"op3", &Record::op3},
        {"op4", &Record::op4}, {"op5", &Record::op5},
        {"e1", &Record::e1}, {"e2", &Record::e2}, {"e3", &Record::e3},
        {"ealt1", &Record::ealt1}, {"ealt2", &Record::ealt2}, {"ealt3", &Record::ealt3},
        {"gx3_hat", &Record::gx3_hat}, {"gx4_hat", &Record::gx4_hat},
        {"gx3_err", &Record::gx3_err}, {"gx4_err", &Record::gx4_err},
    };
    return reg;
}

bool is_known_column(const std::string& name) {
    for (const auto& c : column_registry())
        if (name == c.name) return true;
    return false;
}

std::vector<std::string> all_column_names() {
    std::vector<std::string> out;
    out.reserve(column_registry().size());
    for (const auto& c : column_registry()) out.emplace_back(c.name);
    return out;
}

std::vector<std::string> default_columns(const Scenario& s) {
    std::vector<std::string> cols = {"t", "x1", "x2", "x3", "x4",
                                     "y1", "y2", "y3", "y4", "y5", "y6",
                                     "z0", "Y1", "Y2", "Y3"};
    if (s.drem_enabled) {
        for (const char* c : {"Delta", "int_Delta_sq", "th1_hat", "th2_hat",
                              "x1_hat", "x3_hat", "x4_hat", "x1_err", "x3_err", "x4_err"})
            cols.emplace_back(c);
    }
    if (s.overparam_enabled) {
        for (const char* c : {"op1", "op2", "op3", "op4", "op5", "e1", "e2", "e3"})
            cols.emplace_back(c);
    }
    if (s.gradient_enabled) {
        for (const char* c : {"gx3_hat", "gx4_hat", "gx3_err", "gx4_err"})
            cols.emplace_back(c);
    }
    return cols;
}

void emit_csv(const Trajectory& t, const std::vector<std::string>& columns,
              const std::string& path) {
    std::vector<double Record::*> fields;
    fields.reserve(columns.size());
    for (const auto& name : columns) {
        const ColumnDef* found = nullptr;
        for (const auto& c : column_registry())
            if (name == c.name) { found = &c; break; }
        if (!found) throw ConfigError("unknown output column: " + name);
        fields.push_back(found->field);
    }
    if (fields.empty()) throw ConfigError("empty output column selection");

    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) os << ',';
        os << columns[i];
    }
    os << '\n';
    char buf[32];
    for (const Record& r : t.records) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) os << ',';
            std::snprintf(buf, sizeof buf, "%.17g", r.*fields[i]);
            os << buf;
        }
        os << '\n';
    }
    os.flush();
    if (!os) throw IoError("write failed: " + path);
}

}  // namespace pmuobs
