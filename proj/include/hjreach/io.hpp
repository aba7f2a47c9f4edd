#pragma once

// Persistence: binary value-field files and CSV exports.
//
// Field files carry the magic "HJVF" and a fixed little-endian layout that
// does not depend on the host byte order, so a file written on one machine
// loads bit-exactly on any other:
//
//   bytes  0..3    magic "HJVF"
//   bytes  4..5    format version, uint16 (currently 1)
//   bytes  6..53   axis bounds, 6 x float64: lo_x, lo_K, lo_E, hi_x, hi_K, hi_E
//   bytes 54..65   node counts, 3 x uint32
//   bytes 66..73   time label, float64
//   bytes 74..     payload, counts-product float64 values, x-fastest order
//
// CSV exports print floats with 9 significant digits and are byte-stable for
// identical inputs. Each file opens with a '#' comment line naming the units
// (readers such as pandas skip it via comment='#').

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "reach.hpp"
#include "synth.hpp"

namespace hjreach {

inline constexpr std::uint16_t field_file_version = 1;
inline constexpr std::size_t field_file_header_bytes = 74;

namespace detail {

inline void put_u16(std::string& out, std::uint16_t v)
{
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

inline void put_u32(std::string& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f64(std::string& out, double v)
{
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

/// Cursor over a loaded buffer. Reads are little-endian; running past the
/// end reports the file size as the offending offset.
struct ByteReader {
    const std::string& buf;
    std::size_t pos = 0;

    void need(std::size_t n, const char* what)
    {
        if (pos + n > buf.size())
            throw format_error(std::string("load_field: file truncated inside ") + what,
                               buf.size());
    }
    std::uint8_t byte(std::size_t i) const { return static_cast<std::uint8_t>(buf[i]); }

    std::uint16_t u16(const char* what)
    {
        need(2, what);
        const std::uint16_t v =
            static_cast<std::uint16_t>(byte(pos) | (std::uint16_t(byte(pos + 1)) << 8));
        pos += 2;
        return v;
    }
    std::uint32_t u32(const char* what)
    {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(byte(pos + i)) << (8 * i);
        pos += 4;
        return v;
    }
    double f64(const char* what)
    {
        need(8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(byte(pos + i)) << (8 * i);
        pos += 8;
        return std::bit_cast<double>(v);
    }
};

/// %.9g with NaN spelled "nan" regardless of sign, keeping CSV output
/// byte-stable across libc variants.
inline std::string fmt_g9(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline void write_text(const std::string& body, const std::string& path)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("export_csv: cannot open " + path);
    os.write(body.data(), static_cast<std::streamsize>(body.size()));
    os.flush();
    if (!os) throw std::runtime_error("export_csv: write failed for " + path);
}

} // namespace detail

inline void save_field(const ScalarField& field, const std::string& path)
{
    std::string out;
    out.reserve(field_file_header_bytes + 8 * field.values.size());
    out += "HJVF";
    detail::put_u16(out, field_file_version);
    for (int a = 0; a < 3; ++a) detail::put_f64(out, field.spec.lo[a]);
    for (int a = 0; a < 3; ++a) detail::put_f64(out, field.spec.hi[a]);
    for (int a = 0; a < 3; ++a)
        detail::put_u32(out, static_cast<std::uint32_t>(field.spec.counts[a]));
    detail::put_f64(out, field.time_label);
    for (double v : field.values) detail::put_f64(out, v);

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("save_field: cannot open " + path);
    os.write(out.data(), static_cast<std::streamsize>(out.size()));
    os.flush();
    if (!os) throw std::runtime_error("save_field: write failed for " + path);
}

inline ScalarField load_field(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_field: cannot open " + path);
    std::string buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());

    if (buf.size() < 4 || buf.compare(0, 4, "HJVF") != 0)
        throw format_error("load_field: bad magic, expected \"HJVF\"", 0);

    detail::ByteReader r{buf, 4};
    const std::uint16_t version = r.u16("the format version");
    if (version != field_file_version)
        throw format_error("load_field: unsupported format version " + std::to_string(version),
                           4);

    Vec3 lo, hi;
    for (int a = 0; a < 3; ++a) lo[a] = r.f64("the axis bounds");
    for (int a = 0; a < 3; ++a) hi[a] = r.f64("the axis bounds");
    Index3 counts;
    for (int a = 0; a < 3; ++a) {
        const std::uint32_t c = r.u32("the node counts");
        if (c > static_cast<std::uint32_t>(std::numeric_limits<int>::max()))
            throw format_error("load_field: implausible node count " + std::to_string(c),
                               r.pos - 4);
        counts[a] = static_cast<int>(c);
    }
    const double time_label = r.f64("the time label");

    GridSpec spec;
    try {
        spec = GridSpec::make(lo, hi, counts);
    } catch (const std::invalid_argument& e) {
        throw format_error(std::string("load_field: invalid grid geometry: ") + e.what(), 6);
    }

    const std::size_t nodes = spec.num_nodes();
    const std::size_t expected = field_file_header_bytes + 8 * nodes;
    if (buf.size() < expected)
        throw format_error("load_field: payload holds " +
                               std::to_string((buf.size() - field_file_header_bytes) / 8) +
                               " of " + std::to_string(nodes) + " values",
                           buf.size());
    if (buf.size() > expected)
        throw format_error("load_field: " + std::to_string(buf.size() - expected) +
                               " trailing bytes after the payload",
                           expected);

    std::vector<double> values(nodes);
    for (std::size_t n = 0; n < nodes; ++n) values[n] = r.f64("the payload");
    return ScalarField::make(spec, time_label, std::move(values));
}

/// Writes one row per slice node, first free axis fastest. Requires a slice
/// produced by extract_slice (the coordinate vectors must be populated).
inline void export_csv(const BrsSlice& slice, const std::string& path)
{
    const char* a0 = axis_name(slice.free_axes[0]);
    const char* a1 = axis_name(slice.free_axes[1]);
    std::string out = "# BRS slice at " + std::string(axis_name(slice.axis)) + " = " +
                      detail::fmt_g9(slice.level) +
                      "; coordinates in native units (x tons, K capacity units, E energy "
                      "units); member = 1 where value <= 0\n";
    out += std::string(a0) + "," + a1 + ",value,member\n";
    for (int b = 0; b < slice.counts[1]; ++b)
        for (int a = 0; a < slice.counts[0]; ++a) {
            out += detail::fmt_g9(slice.coords[0].at(a)) + "," +
                   detail::fmt_g9(slice.coords[1].at(b)) + "," +
                   detail::fmt_g9(slice.value_at(a, b)) + "," +
                   (slice.member_at(a, b) ? "1" : "0") + "\n";
        }
    detail::write_text(out, path);
}

inline void export_csv(const Trajectory& traj, const std::string& path)
{
    std::string out =
        "# rollout: t in years, x in tons, K in capacity units, E in energy units, q and I "
        "dimensionless in [0,1], eta in tons/year, value sampled from the active snapshot, "
        "flags are 0/1\n";
    out += "t,x,K,E,q,I,eta,value,in_domain,in_target\n";
    for (const TrajectorySample& s : traj.samples) {
        out += detail::fmt_g9(s.t) + "," + detail::fmt_g9(s.z[0]) + "," +
               detail::fmt_g9(s.z[1]) + "," + detail::fmt_g9(s.z[2]) + "," +
               detail::fmt_g9(s.u.q) + "," + detail::fmt_g9(s.u.i) + "," +
               detail::fmt_g9(s.eta) + "," + detail::fmt_g9(s.value) + "," +
               (s.in_domain ? "1" : "0") + "," + (s.in_target ? "1" : "0") + "\n";
    }
    detail::write_text(out, path);
}

inline void export_csv(const FieldComparison& cmp, const std::string& path)
{
    std::string out =
        "# value-field comparison: dominance_fraction is the share of nodes where field A <= "
        "field B, volumes in tons x capacity units x energy units, volume_ratio = volume_b / "
        "volume_a\n";
    out += "metric,value\n";
    out += "nodes," + std::to_string(cmp.nodes) + "\n";
    out += "dominance_fraction," + detail::fmt_g9(cmp.dominance_fraction) + "\n";
    out += "volume_a," + detail::fmt_g9(cmp.volume_a) + "\n";
    out += "volume_b," + detail::fmt_g9(cmp.volume_b) + "\n";
    out += "volume_ratio," + detail::fmt_g9(cmp.volume_ratio) + "\n";
    detail::write_text(out, path);
}

} // namespace hjreach
