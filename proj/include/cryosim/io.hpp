#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "cryosim/faults.hpp"
#include "cryosim/trace.hpp"

namespace cryo {

/// FNV-1a 64-bit, used for config provenance hashes.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline constexpr const char* kTraceHeader =
    "t,T_E,T_C,setpoint,filtered_setpoint,u,Q_ab,x_amp,P_comp";

/// Renders a trace as CSV: frozen header and column order, full float
/// precision, newline-terminated. Byte-stable across reruns.
inline std::string trace_to_csv(const Trace& tr) {
    std::string out(kTraceHeader);
    out += '\n';
    char buf[256];
    for (const TracePoint& p : tr.points) {
        std::snprintf(buf, sizeof buf,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", p.t, p.cold,
                      p.hot, p.setpoint, p.filtered_sp, p.current, p.load, p.piston_amp,
                      p.comp_pressure);
        out += buf;
    }
    return out;
}

/// Minimal ordered JSON writer; enough for the summary files and
/// deterministic by construction.
class JsonWriter {
  public:
    JsonWriter& begin_object() { open("{"); return *this; }
    JsonWriter& end_object() { close("}"); return *this; }
    JsonWriter& begin_array(const std::string& key) { key_prefix(key); open("["); return *this; }
    JsonWriter& begin_object(const std::string& key) { key_prefix(key); open("{"); return *this; }
    JsonWriter& end_array() { close("]"); return *this; }

    JsonWriter& field(const std::string& key, const std::string& value) {
        key_prefix(key);
        out_ += quote(value);
        return *this;
    }
    JsonWriter& field(const std::string& key, const char* value) {
        return field(key, std::string(value));
    }
    JsonWriter& field(const std::string& key, double value) {
        key_prefix(key);
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", value);
        out_ += buf;
        return *this;
    }
    JsonWriter& field(const std::string& key, long value) {
        key_prefix(key);
        out_ += std::to_string(value);
        return *this;
    }
    JsonWriter& field(const std::string& key, bool value) {
        key_prefix(key);
        out_ += value ? "true" : "false";
        return *this;
    }
    JsonWriter& element(double value) {
        element_prefix();
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", value);
        out_ += buf;
        return *this;
    }
    // Splices pre-rendered elements (already comma-joined) into an array.
    JsonWriter& raw_elements(const std::string& rendered) {
        if (rendered.empty()) return *this;
        element_prefix();
        out_ += rendered;
        return *this;
    }

    const std::string& str() const { return out_; }

  private:
    static std::string quote(const std::string& s) {
        std::string q = "\"";
        for (char c : s) {
            switch (c) {
                case '"': q += "\\\""; break;
                case '\\': q += "\\\\"; break;
                case '\n': q += "\\n"; break;
                case '\t': q += "\\t"; break;
                default: q += c;
            }
        }
        q += '"';
        return q;
    }
    void key_prefix(const std::string& key) {
        element_prefix();
        out_ += quote(key);
        out_ += ": ";
    }
    void element_prefix() {
        if (!out_.empty()) {
            const char last = out_.back();
            if (last != '{' && last != '[') out_ += ", ";
        }
    }
    void open(const char* b) { element_prefix_for_open(); out_ += b; }
    void close(const char* b) { out_ += b; }
    void element_prefix_for_open() {
        if (!out_.empty()) {
            const char last = out_.back();
            if (last != '{' && last != '[' && last != ' ') out_ += ", ";
        }
    }

    std::string out_;
};

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SimFault("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw SimFault("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw SimFault("cannot open: " + path);
    std::string out((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return out;
}

}  // namespace cryo
