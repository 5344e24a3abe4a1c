#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "twr/common.hpp"

namespace twr::store {

static_assert(std::endian::native == std::endian::little,
              "tensor container is little-endian on disk and in memory");

using json = nlohmann::json;

// On-disk layout: "MDT1" | dtype u8 | ndim u32 | dims u32 each | payload,
// payload row-major little-endian. Round trips are bitwise exact.
enum class Dtype : std::uint8_t { f32 = 0, f64 = 1, c64 = 2, i32 = 3 };

inline std::size_t element_size(Dtype d) {
    switch (d) {
        case Dtype::f32: return 4;
        case Dtype::f64: return 8;
        case Dtype::c64: return 8;  // interleaved float32 re,im
        case Dtype::i32: return 4;
    }
    throw FormatError("unknown dtype code");
}

struct Tensor {
    Dtype dtype = Dtype::f64;
    std::vector<std::uint32_t> dims;
    std::vector<std::uint8_t> data;  // raw payload bytes

    std::size_t element_count() const {
        std::size_t n = 1;
        for (auto d : dims) n *= d;
        return n;
    }

    static Tensor from_matrix(const Matrix& m) {
        Tensor t;
        t.dtype = Dtype::f64;
        t.dims = {static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols())};
        t.data.resize(t.element_count() * 8);
        auto* p = reinterpret_cast<double*>(t.data.data());
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) *p++ = m(r, c);
        return t;
    }

    static Tensor from_vector(const Vector& v) {
        Tensor t;
        t.dtype = Dtype::f64;
        t.dims = {static_cast<std::uint32_t>(v.size())};
        t.data.resize(t.element_count() * 8);
        std::memcpy(t.data.data(), v.data(), t.data.size());
        return t;
    }

    // Complex matrices are stored as interleaved float32 pairs.
    static Tensor from_cmatrix(const CMatrix& m) {
        Tensor t;
        t.dtype = Dtype::c64;
        t.dims = {static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols())};
        t.data.resize(t.element_count() * 8);
        auto* p = reinterpret_cast<float*>(t.data.data());
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                *p++ = static_cast<float>(m(r, c).real());
                *p++ = static_cast<float>(m(r, c).imag());
            }
        }
        return t;
    }

    Matrix to_matrix() const {
        if (dims.size() != 2) throw FormatError("tensor is not 2-D");
        Matrix m(dims[0], dims[1]);
        if (dtype == Dtype::f64) {
            auto* p = reinterpret_cast<const double*>(data.data());
            for (std::uint32_t r = 0; r < dims[0]; ++r)
                for (std::uint32_t c = 0; c < dims[1]; ++c) m(r, c) = *p++;
        } else if (dtype == Dtype::f32) {
            auto* p = reinterpret_cast<const float*>(data.data());
            for (std::uint32_t r = 0; r < dims[0]; ++r)
                for (std::uint32_t c = 0; c < dims[1]; ++c) m(r, c) = *p++;
        } else {
            throw FormatError("tensor dtype is not real");
        }
        return m;
    }

    Vector to_vector() const {
        if (dims.size() != 1 || dtype != Dtype::f64) throw FormatError("tensor is not a f64 vector");
        Vector v(dims[0]);
        std::memcpy(v.data(), data.data(), data.size());
        return v;
    }

    CMatrix to_cmatrix() const {
        if (dims.size() != 2 || dtype != Dtype::c64) throw FormatError("tensor is not a c64 matrix");
        CMatrix m(dims[0], dims[1]);
        auto* p = reinterpret_cast<const float*>(data.data());
        for (std::uint32_t r = 0; r < dims[0]; ++r) {
            for (std::uint32_t c = 0; c < dims[1]; ++c) {
                const double re = *p++;
                const double im = *p++;
                m(r, c) = {re, im};
            }
        }
        return m;
    }
};

namespace detail {

inline void write_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), 4);
}

inline std::uint32_t read_u32(std::istream& is) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 4);
    if (!is) throw FormatError("truncated tensor file");
    return v;
}

}  // namespace detail

inline void save_tensor(const std::filesystem::path& path, const Tensor& t) {
    for (auto d : t.dims)
        if (d == 0) throw FormatError("zero-sized dimension");
    if (t.dims.empty()) throw FormatError("tensor must have at least one dimension");
    if (t.data.size() != t.element_count() * element_size(t.dtype))
        throw FormatError("payload size does not match dims");

    // write-temp-then-rename so readers never observe a partial file
    const auto tmp = path.parent_path() / (path.filename().string() + ".tmp");
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open for writing: " + tmp.string());
        os.write("MDT1", 4);
        const auto dtype = static_cast<std::uint8_t>(t.dtype);
        os.write(reinterpret_cast<const char*>(&dtype), 1);
        detail::write_u32(os, static_cast<std::uint32_t>(t.dims.size()));
        for (auto d : t.dims) detail::write_u32(os, d);
        os.write(reinterpret_cast<const char*>(t.data.data()),
                 static_cast<std::streamsize>(t.data.size()));
        if (!os) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + path.string() + ": " + ec.message());
}

inline Tensor load_tensor(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path.string());
    char magic[4] = {};
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "MDT1", 4) != 0) throw FormatError("bad magic: " + path.string());
    std::uint8_t dtype_code = 0;
    is.read(reinterpret_cast<char*>(&dtype_code), 1);
    if (!is || dtype_code > 3) throw FormatError("bad dtype: " + path.string());
    Tensor t;
    t.dtype = static_cast<Dtype>(dtype_code);
    const std::uint32_t ndim = detail::read_u32(is);
    if (ndim == 0 || ndim > 8) throw FormatError("bad ndim: " + path.string());
    t.dims.resize(ndim);
    for (auto& d : t.dims) {
        d = detail::read_u32(is);
        if (d == 0) throw FormatError("zero dimension: " + path.string());
    }
    const std::size_t expect = t.element_count() * element_size(t.dtype);
    t.data.resize(expect);
    is.read(reinterpret_cast<char*>(t.data.data()), static_cast<std::streamsize>(expect));
    if (static_cast<std::size_t>(is.gcount()) != expect)
        throw FormatError("declared payload length mismatches actual: " + path.string());
    // must be exactly at EOF
    is.peek();
    if (!is.eof()) throw FormatError("trailing bytes after payload: " + path.string());
    return t;
}

// Dataset manifest. The raw JSON object is kept so fields this version does
// not know about survive a load/save cycle.
struct SampleRecord {
    std::string id;
    std::string class_name;
    std::string split;  // train | val | test
    double height = 0.0;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> files;  // role -> relative path
};

struct DatasetManifest {
    json raw = json::object();

    int schema_version() const { return raw.at("schema_version").get<int>(); }
    std::vector<std::string> classes() const {
        return raw.at("classes").get<std::vector<std::string>>();
    }

    std::vector<SampleRecord> samples() const {
        std::vector<SampleRecord> out;
        for (const auto& s : raw.at("samples")) {
            SampleRecord r;
            r.id = s.at("id").get<std::string>();
            r.class_name = s.at("class").get<std::string>();
            r.split = s.at("split").get<std::string>();
            r.height = s.at("height").get<double>();
            r.seed = s.at("seed").get<std::uint64_t>();
            if (s.contains("files"))
                r.files = s.at("files").get<std::map<std::string, std::string>>();
            out.push_back(std::move(r));
        }
        return out;
    }

    void set_samples(const std::vector<SampleRecord>& recs) {
        json arr = json::array();
        for (const auto& r : recs) {
            json s;
            s["id"] = r.id;
            s["class"] = r.class_name;
            s["split"] = r.split;
            s["height"] = r.height;
            s["seed"] = r.seed;
            s["files"] = r.files;
            arr.push_back(std::move(s));
        }
        raw["samples"] = std::move(arr);
    }
};

inline void validate_manifest(const json& j) {
    if (!j.is_object()) throw SchemaError("manifest root must be an object");
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
        throw SchemaError("manifest missing integer schema_version");
    if (!j.contains("classes") || !j["classes"].is_array() || j["classes"].empty())
        throw SchemaError("manifest missing class list");
    for (const auto& c : j["classes"])
        if (!c.is_string()) throw SchemaError("class names must be strings");
    if (!j.contains("radar") || !j["radar"].is_object())
        throw SchemaError("manifest missing radar params");
    if (!j.contains("seed")) throw SchemaError("manifest missing creation seed");
    if (!j.contains("samples") || !j["samples"].is_array())
        throw SchemaError("manifest missing samples array");
    std::set<std::string> ids;
    std::set<std::string> classes(j["classes"].begin(), j["classes"].end());
    for (const auto& s : j["samples"]) {
        for (const char* k : {"id", "class", "split", "height", "seed"})
            if (!s.contains(k)) throw SchemaError(std::string("sample record missing ") + k);
        const auto id = s["id"].get<std::string>();
        if (!ids.insert(id).second) throw SchemaError("duplicate sample id: " + id);
        const auto split = s["split"].get<std::string>();
        if (split != "train" && split != "val" && split != "test")
            throw SchemaError("bad split: " + split);
        if (!classes.count(s["class"].get<std::string>()))
            throw SchemaError("sample class not in class list");
    }
}

inline void save_manifest(const std::filesystem::path& path, const DatasetManifest& m) {
    validate_manifest(m.raw);
    const auto tmp = path.parent_path() / (path.filename().string() + ".tmp");
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open for writing: " + tmp.string());
        os << m.raw.dump(2) << "\n";
        if (!os) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + path.string() + ": " + ec.message());
}

inline DatasetManifest load_manifest(const std::filesystem::path& path, bool check_files = true) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path.string());
    DatasetManifest m;
    try {
        m.raw = json::parse(is);
    } catch (const json::parse_error& e) {
        throw SchemaError("manifest is not valid JSON: " + std::string(e.what()));
    }
    validate_manifest(m.raw);
    if (check_files) {
        const auto dir = path.parent_path();
        for (const auto& s : m.raw["samples"]) {
            if (!s.contains("files")) continue;
            for (const auto& [role, rel] : s["files"].items()) {
                const auto p = dir / rel.get<std::string>();
                if (!std::filesystem::exists(p))
                    throw SchemaError("referenced file missing: " + p.string());
            }
        }
    }
    return m;
}

}  // namespace twr::store
