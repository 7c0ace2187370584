#include "dlstream/replay.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "dlstream/errors.hpp"

namespace dls {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

template <typename T>
T parse_number(std::string_view s, std::size_t line_no) {
    T v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ProtocolViolation("line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
    }
    return v;
}

Schema parse_header(std::string_view line, std::size_t line_no) {
    auto fields = split_csv(line);
    if (fields.size() < 2 || fields[0] != "H") throw ProtocolViolation("line 1: missing H header");
    const auto n_classes = parse_number<std::uint32_t>(fields[1], line_no);
    std::vector<Attribute> attrs;
    for (std::size_t i = 2; i < fields.size(); ++i) {
        const auto f = fields[i];
        const auto colon = f.find(':');
        const auto kind = f.substr(0, colon);
        Attribute a;
        a.name = colon == std::string_view::npos ? "a" + std::to_string(i - 2) : std::string(f.substr(colon + 1));
        if (kind == "N") {
            a.kind = AttributeKind::Numeric;
        } else if (kind.size() > 1 && kind[0] == 'C') {
            a.kind = AttributeKind::Nominal;
            a.cardinality = parse_number<std::uint32_t>(kind.substr(1), line_no);
        } else {
            throw ProtocolViolation("line 1: unknown attribute kind '" + std::string(kind) + "'");
        }
        attrs.push_back(std::move(a));
    }
    try {
        return Schema(std::move(attrs), n_classes);
    } catch (const InvalidArgument& e) {
        throw ProtocolViolation(std::string("line 1: ") + e.what());
    }
}

}  // namespace

void write_replay(std::ostream& out, const StreamSection& section) {
    validate_section(section);
    const auto& schema = section.schema;
    out << "H," << schema.n_classes();
    for (const auto& a : schema.attributes()) {
        if (a.kind == AttributeKind::Numeric) {
            out << ",N:" << a.name;
        } else {
            out << ",C" << a.cardinality << ':' << a.name;
        }
    }
    out << '\n';
    for (const auto& e : section.events) {
        switch (e.kind) {
            case EventKind::Instance: {
                out << "I," << e.id << ',' << e.time;
                const auto& x = e.features();
                std::size_t ni = 0;
                std::size_t ci = 0;
                for (const auto& a : schema.attributes()) {
                    if (a.kind == AttributeKind::Numeric) {
                        out << ',' << format_double(x.numeric[ni++]);
                    } else {
                        out << ',' << x.nominal[ci++];
                    }
                }
                out << '\n';
                break;
            }
            case EventKind::Label: out << "L," << e.id << ',' << e.time << ',' << e.class_label() << '\n'; break;
            case EventKind::OracleLabel: out << "O," << e.id << ',' << e.time << ',' << e.class_label() << '\n'; break;
        }
    }
}

void write_replay_file(const std::filesystem::path& path, const StreamSection& section) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
    write_replay(out, section);
}

StreamSection read_replay(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ProtocolViolation("empty replay file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    StreamSection section;
    section.schema = parse_header(line, line_no);
    const auto& schema = section.schema;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() < 3) throw ProtocolViolation("line " + std::to_string(line_no) + ": too few fields");
        const auto id = parse_number<InstanceId>(fields[1], line_no);
        const auto t = parse_number<Tick>(fields[2], line_no);
        if (fields[0] == "I") {
            if (fields.size() != 3 + schema.attributes().size()) {
                throw ProtocolViolation("line " + std::to_string(line_no) + ": attribute count does not match header");
            }
            FeatureVector x;
            x.numeric.reserve(schema.numeric_count());
            x.nominal.reserve(schema.nominal_count());
            for (std::size_t i = 0; i < schema.attributes().size(); ++i) {
                if (schema.attributes()[i].kind == AttributeKind::Numeric) {
                    x.numeric.push_back(parse_number<double>(fields[3 + i], line_no));
                } else {
                    x.nominal.push_back(parse_number<std::uint32_t>(fields[3 + i], line_no));
                }
            }
            section.events.push_back(StreamEvent::instance(id, t, std::move(x)));
        } else if (fields[0] == "L" || fields[0] == "O") {
            if (fields.size() != 4) throw ProtocolViolation("line " + std::to_string(line_no) + ": label line needs 4 fields");
            const auto y = parse_number<ClassLabel>(fields[3], line_no);
            section.events.push_back(fields[0] == "L" ? StreamEvent::label(id, t, y) : StreamEvent::oracle_label(id, t, y));
        } else {
            throw ProtocolViolation("line " + std::to_string(line_no) + ": unknown record type");
        }
    }
    fit_time_bounds(section);
    validate_section(section);
    return section;
}

StreamSection read_replay_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFound("cannot open replay file '" + path.string() + "'");
    return read_replay(in);
}

}  // namespace dls
