#include "ifsseq/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "json.hpp"

#include "ifsseq/error.hpp"

namespace ifsseq::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& field, const std::string& msg)
{
    throw InputError(source + ": " + (field.empty() ? "" : field + ": ") + msg);
}

std::size_t line_of(const std::string& text, std::size_t byte)
{
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n')
            ++line;
    return line;
}

json parse_json(const std::string& text, const std::string& source)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(source + ": line " + std::to_string(line_of(text, e.byte)) + ": malformed JSON (" +
                         e.what() + ")");
    }
}

std::vector<double> numbers(const json& node, std::size_t expected, const std::string& source, const std::string& field)
{
    if (!node.is_array())
        fail(source, field, "expected an array of " + std::to_string(expected) + " numbers");
    if (node.size() != expected)
        fail(source, field, "expected " + std::to_string(expected) + " numbers, got " + std::to_string(node.size()));
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_number())
            fail(source, field + "[" + std::to_string(i) + "]", "not a number");
        out.push_back(node[i].get<double>());
    }
    return out;
}

Vector to_vector(const std::vector<double>& v)
{
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Ifs ifs_from_json(const json& doc, const std::string& source, const std::string& prefix)
{
    if (!doc.is_object())
        fail(source, prefix, "expected an object");
    const std::string p = prefix.empty() ? "" : prefix + ".";
    if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1)
        fail(source, p + "dim", "expected a positive integer");
    const auto d = static_cast<std::size_t>(doc["dim"].get<long long>());
    if (!doc.contains("domain") || !doc["domain"].is_object())
        fail(source, p + "domain", "expected an object with lo and hi");
    const json& dom = doc["domain"];
    if (!dom.contains("lo"))
        fail(source, p + "domain.lo", "missing");
    if (!dom.contains("hi"))
        fail(source, p + "domain.hi", "missing");
    const auto lo = numbers(dom["lo"], d, source, p + "domain.lo");
    const auto hi = numbers(dom["hi"], d, source, p + "domain.hi");
    std::optional<Box> box;
    try {
        box.emplace(to_vector(lo), to_vector(hi));
    } catch (const InputError& e) {
        fail(source, p + "domain", e.what());
    }

    if (!doc.contains("maps") || !doc["maps"].is_array() || doc["maps"].empty())
        fail(source, p + "maps", "expected a nonempty array");
    std::vector<AffineMap> maps;
    for (std::size_t k = 0; k < doc["maps"].size(); ++k) {
        const std::string field = p + "maps[" + std::to_string(k) + "]";
        const json& m = doc["maps"][k];
        if (!m.is_object() || !m.contains("A") || !m.contains("b"))
            fail(source, field, "expected an object with A and b");
        const auto a = numbers(m["A"], d * d, source, field + ".A");
        const auto b = numbers(m["b"], d, source, field + ".b");
        Matrix mat(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a[r * d + c];
        try {
            maps.emplace_back(std::move(mat), to_vector(b));
        } catch (const InputError& e) {
            fail(source, field, e.what());
        }
    }
    try {
        return Ifs(*box, std::move(maps));
    } catch (const InvalidContraction& e) {
        throw InvalidContraction(source + ": " + p + "maps: " + e.what());
    }
}

json ifs_to_json(const Ifs& s)
{
    const std::size_t d = s.dim();
    json doc;
    doc["dim"] = d;
    std::vector<double> lo(s.domain().lo().data(), s.domain().lo().data() + d);
    std::vector<double> hi(s.domain().hi().data(), s.domain().hi().data() + d);
    doc["domain"] = {{"lo", lo}, {"hi", hi}};
    json maps = json::array();
    for (const AffineMap& f : s.maps()) {
        std::vector<double> a;
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                a.push_back(f.linear()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
        std::vector<double> b(f.offset().data(), f.offset().data() + d);
        maps.push_back({{"A", a}, {"b", b}});
    }
    doc["maps"] = maps;
    return doc;
}

} // namespace

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError(path.string() + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw InputError(path.string() + ": cannot write");
        out << content;
        out.flush();
        if (!out)
            throw InputError(path.string() + ": write failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw InputError(path.string() + ": rename failed");
    }
}

Ifs parse_ifs(const std::string& text, const std::string& source)
{
    return ifs_from_json(parse_json(text, source), source, "");
}

std::string format_ifs(const Ifs& s)
{
    return ifs_to_json(s).dump(2) + "\n";
}

Ifs read_ifs_file(const std::filesystem::path& path)
{
    return parse_ifs(read_file(path), path.string());
}

void write_ifs_file(const std::filesystem::path& path, const Ifs& s)
{
    write_file_atomic(path, format_ifs(s));
}

IfsSequence parse_sequence(const std::string& text, const std::string& source)
{
    const json doc = parse_json(text, source);
    const json* terms = &doc;
    if (doc.is_object()) {
        if (!doc.contains("terms"))
            fail(source, "terms", "missing");
        terms = &doc["terms"];
    }
    if (!terms->is_array() || terms->empty())
        fail(source, "terms", "expected a nonempty array of IFS specs");
    std::vector<Ifs> out;
    for (std::size_t j = 0; j < terms->size(); ++j)
        out.push_back(ifs_from_json((*terms)[j], source, "terms[" + std::to_string(j) + "]"));
    try {
        return IfsSequence(std::move(out));
    } catch (const ArityMismatch& e) {
        throw ArityMismatch(source + ": " + e.what());
    }
}

IfsSequence read_sequence_file(const std::filesystem::path& path)
{
    return parse_sequence(read_file(path), path.string());
}

std::string format_sequence(const IfsSequence& seq)
{
    json doc;
    doc["terms"] = json::array();
    for (const Ifs& t : seq.terms())
        doc["terms"].push_back(ifs_to_json(t));
    return doc.dump(2) + "\n";
}

PointSet parse_points_csv(const std::string& text, double resolution, const std::string& source)
{
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::size_t dim = 0;
    std::vector<double> flat;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t", used) != std::string::npos)
                    throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw InputError(source + ": line " + std::to_string(lineno) + ": not a number: '" + cell + "'");
            }
        }
        if (dim == 0)
            dim = row.size();
        if (row.size() != dim)
            throw InputError(source + ": line " + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                             " coordinates, got " + std::to_string(row.size()));
        flat.insert(flat.end(), row.begin(), row.end());
    }
    if (flat.empty())
        throw InputError(source + ": no points");
    return PointSet(dim, resolution, flat);
}

PointSet read_points_csv(const std::filesystem::path& path, double resolution)
{
    return parse_points_csv(read_file(path), resolution, path.string());
}

std::string format_points_csv(const PointSet& points)
{
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto p = points.point(i);
        for (std::size_t k = 0; k < p.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.12g", p[k]);
            if (k)
                out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

namespace {

class PnmReader {
public:
    PnmReader(const std::string& bytes, const std::string& source) : s_(bytes), source_(source) {}

    std::string magic()
    {
        if (s_.size() < 2 || s_[0] != 'P')
            throw InputError(source_ + ": not a PBM/PGM file");
        pos_ = 2;
        return s_.substr(0, 2);
    }

    unsigned number()
    {
        skip_space();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
            throw InputError(source_ + ": malformed header or pixel data at byte " + std::to_string(pos_));
        unsigned long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + static_cast<unsigned long>(s_[pos_++] - '0');
            if (v > 1'000'000'000UL)
                throw InputError(source_ + ": header value too large");
        }
        return static_cast<unsigned>(v);
    }

    // P1 allows pixels without separators.
    unsigned bit()
    {
        skip_space();
        if (pos_ >= s_.size() || (s_[pos_] != '0' && s_[pos_] != '1'))
            throw InputError(source_ + ": malformed bitmap data at byte " + std::to_string(pos_));
        return static_cast<unsigned>(s_[pos_++] - '0');
    }

    // Exactly one whitespace byte separates the header from binary data.
    void end_header()
    {
        if (pos_ >= s_.size() || !std::isspace(static_cast<unsigned char>(s_[pos_])))
            throw InputError(source_ + ": malformed header");
        ++pos_;
    }

    unsigned char byte()
    {
        if (pos_ >= s_.size())
            throw InputError(source_ + ": truncated pixel data");
        return static_cast<unsigned char>(s_[pos_++]);
    }

private:
    void skip_space()
    {
        while (pos_ < s_.size()) {
            if (s_[pos_] == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n')
                    ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    const std::string& s_;
    const std::string& source_;
    std::size_t pos_ = 0;
};

} // namespace

Raster parse_raster(const std::string& bytes, const std::string& source)
{
    PnmReader rd(bytes, source);
    const std::string magic = rd.magic();
    if (magic != "P1" && magic != "P2" && magic != "P4" && magic != "P5")
        throw InputError(source + ": unsupported format " + magic + " (expected P1, P2, P4 or P5)");
    Raster r;
    r.width = rd.number();
    r.height = rd.number();
    if (r.width == 0 || r.height == 0)
        throw InputError(source + ": empty raster");
    const bool bitmap = magic == "P1" || magic == "P4";
    r.kind = bitmap ? Raster::Kind::Bitmap : Raster::Kind::Greymap;
    r.maxval = bitmap ? 1 : rd.number();
    if (r.maxval == 0 || r.maxval > 65535)
        throw InputError(source + ": maxval out of range");
    r.value.resize(r.width * r.height);

    if (magic == "P1") {
        for (auto& v : r.value)
            v = static_cast<std::uint16_t>(rd.bit());
    } else if (magic == "P2") {
        for (auto& v : r.value) {
            const unsigned x = rd.number();
            if (x > r.maxval)
                throw InputError(source + ": pixel value exceeds maxval");
            v = static_cast<std::uint16_t>(x);
        }
    } else if (magic == "P4") {
        rd.end_header();
        const std::size_t stride = (r.width + 7) / 8;
        for (std::size_t row = 0; row < r.height; ++row) {
            for (std::size_t b = 0; b < stride; ++b) {
                const unsigned char byte = rd.byte();
                for (std::size_t bit = 0; bit < 8; ++bit) {
                    const std::size_t col = b * 8 + bit;
                    if (col < r.width)
                        r.value[row * r.width + col] = (byte >> (7 - bit)) & 1U;
                }
            }
        }
    } else {
        rd.end_header();
        const bool wide = r.maxval > 255;
        for (auto& v : r.value) {
            unsigned x = rd.byte();
            if (wide)
                x = (x << 8) | rd.byte();
            if (x > r.maxval)
                throw InputError(source + ": pixel value exceeds maxval");
            v = static_cast<std::uint16_t>(x);
        }
    }
    return r;
}

Raster read_raster(const std::filesystem::path& path)
{
    return parse_raster(read_file(path), path.string());
}

std::string format_pbm(const Raster& mask)
{
    std::string out = "P4\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) + "\n";
    const std::size_t stride = (mask.width + 7) / 8;
    for (std::size_t row = 0; row < mask.height; ++row) {
        for (std::size_t b = 0; b < stride; ++b) {
            unsigned char byte = 0;
            for (std::size_t bit = 0; bit < 8; ++bit) {
                const std::size_t col = b * 8 + bit;
                if (col < mask.width && mask.at(row, col))
                    byte |= static_cast<unsigned char>(1U << (7 - bit));
            }
            out += static_cast<char>(byte);
        }
    }
    return out;
}

std::string format_pgm(const Raster& mask)
{
    std::string out = "P5\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) + "\n255\n";
    for (std::uint16_t v : mask.value)
        out += static_cast<char>(v ? 255 : 0);
    return out;
}

Ingested raster_to_points(const Raster& raster, std::optional<unsigned> threshold)
{
    const unsigned cut = threshold.value_or(raster.kind == Raster::Kind::Bitmap ? 1U : 128U);
    const std::size_t longest = std::max(raster.width, raster.height);
    const double pitch = longest > 1 ? 1.0 / static_cast<double>(longest - 1) : 1.0;
    const bool one_d = raster.height == 1;
    std::vector<double> flat;
    for (std::size_t row = 0; row < raster.height; ++row) {
        for (std::size_t col = 0; col < raster.width; ++col) {
            if (raster.at(row, col) < cut)
                continue;
            flat.push_back(static_cast<double>(col) * pitch);
            if (!one_d)
                flat.push_back(static_cast<double>(raster.height - 1 - row) * pitch);
        }
    }
    if (flat.empty())
        throw InputError("raster: no foreground pixels");
    const std::size_t dim = one_d ? 1 : 2;
    Vector hi(static_cast<Eigen::Index>(dim));
    hi[0] = static_cast<double>(raster.width - 1) * pitch;
    if (!one_d)
        hi[1] = static_cast<double>(raster.height - 1) * pitch;
    return {PointSet(dim, pitch, flat), Box(Vector::Zero(static_cast<Eigen::Index>(dim)), hi)};
}

Raster points_to_raster(const PointSet& points, const Box& domain, double pitch)
{
    if (points.dim() > 2 || points.dim() != domain.dim())
        throw InputError("raster: only 1-d and 2-d point sets can be rasterized");
    if (!(pitch > 0.0))
        throw InputError("raster: pitch must be positive");
    const auto span_of = [&](Eigen::Index k) {
        return static_cast<std::size_t>(std::llround((domain.hi()[k] - domain.lo()[k]) / pitch)) + 1;
    };
    Raster r;
    r.kind = Raster::Kind::Bitmap;
    r.width = span_of(0);
    r.height = points.dim() == 2 ? span_of(1) : 1;
    if (r.width * r.height > 100'000'000)
        throw ResourceError("raster: image would exceed 1e8 pixels");
    r.value.assign(r.width * r.height, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto p = points.point(i);
        const long long col = std::llround((p[0] - domain.lo()[0]) / pitch);
        long long row = 0;
        if (points.dim() == 2)
            row = static_cast<long long>(r.height) - 1 - std::llround((p[1] - domain.lo()[1]) / pitch);
        if (col < 0 || row < 0 || col >= static_cast<long long>(r.width) || row >= static_cast<long long>(r.height))
            continue;
        r.value[static_cast<std::size_t>(row) * r.width + static_cast<std::size_t>(col)] = 1;
    }
    return r;
}

} // namespace ifsseq::io
