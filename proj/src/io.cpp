#include "spinelab/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace spinelab {

namespace {

[[noreturn]] void parse_error(std::size_t line_no, const std::string& what) {
    throw Error("line " + std::to_string(line_no) + ": " + what);
}

bool skip_line(const std::string& line) {
    auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string::npos || line[pos] == 'c' || line[pos] == '%';
}

} // namespace

void write_instance(std::ostream& out, const Formula& f) {
    const int t = f.domain();
    const int k = f.arity();
    if (t > 10)
        throw UnsupportedError("instance format stores values as single digits (t <= 10)");
    out << "p gcsp " << f.num_vars() << ' ' << f.size() << ' ' << k << ' ' << t << '\n';
    for (const auto& tpl : f.templates().templates()) {
        out << "t " << tpl.id();
        for (std::size_t idx = 0; idx < tpl.tuple_count(); ++idx) {
            if (!tpl.accepts(idx))
                continue;
            out << ' ';
            for (int d : tpl.tuple_at(idx))
                out << static_cast<char>('0' + d);
        }
        out << '\n';
    }
    for (const auto& c : f.constraints()) {
        out << "e " << c.template_id;
        for (int v : c.vars)
            out << ' ' << v + 1;
        if (c.is_signed())
            for (std::size_t j = 0; j < c.vars.size(); ++j)
                out << ' ' << (c.neg(j) ? '-' : '+');
        out << '\n';
    }
}

Formula read_instance(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    int n = -1, k = 0, t = 0;
    std::size_t m = 0;
    std::vector<ConstraintTemplate> templates;
    std::vector<Constraint> constraints;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line))
            continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "p") {
            std::string kind;
            ls >> kind >> n >> m >> k >> t;
            if (!ls || kind != "gcsp")
                parse_error(line_no, "expected 'p gcsp <n> <m> <k> <t>'");
            if (n < 0 || k < 1 || t < 2 || t > 10)
                parse_error(line_no, "header values out of range");
            continue;
        }
        if (n < 0)
            parse_error(line_no, "content before the header");
        if (tag == "t") {
            int id;
            if (!(ls >> id))
                parse_error(line_no, "template line needs an id");
            std::size_t size = 1;
            for (int i = 0; i < k; ++i)
                size *= static_cast<std::size_t>(t);
            std::vector<std::uint8_t> table(size, 0);
            std::string word;
            std::vector<int> tuple(static_cast<std::size_t>(k));
            while (ls >> word) {
                if (static_cast<int>(word.size()) != k)
                    parse_error(line_no, "tuple '" + word + "' does not have " + std::to_string(k) + " digits");
                for (int i = 0; i < k; ++i) {
                    const int d = word[static_cast<std::size_t>(i)] - '0';
                    if (d < 0 || d >= t)
                        parse_error(line_no, "tuple '" + word + "' has a digit outside the domain");
                    tuple[static_cast<std::size_t>(i)] = d;
                }
                std::size_t idx = 0;
                for (int d : tuple)
                    idx = idx * static_cast<std::size_t>(t) + static_cast<std::size_t>(d);
                table[idx] = 1;
            }
            templates.emplace_back(id, t, k, std::move(table));
        } else if (tag == "e") {
            Constraint c;
            if (!(ls >> c.template_id))
                parse_error(line_no, "constraint line needs a template id");
            for (int i = 0; i < k; ++i) {
                long long v;
                if (!(ls >> v))
                    parse_error(line_no, "constraint needs " + std::to_string(k) + " variables");
                if (v < 1 || v > n)
                    parse_error(line_no, "variable " + std::to_string(v) + " out of range");
                c.vars.push_back(static_cast<int>(v - 1));
            }
            std::string sign;
            while (ls >> sign) {
                if (sign != "+" && sign != "-")
                    parse_error(line_no, "sign must be '+' or '-'");
                c.negated.push_back(sign == "-" ? 1 : 0);
            }
            if (!c.negated.empty() && static_cast<int>(c.negated.size()) != k)
                parse_error(line_no, "constraint needs 0 or " + std::to_string(k) + " signs");
            constraints.push_back(std::move(c));
        } else {
            parse_error(line_no, "unknown line tag '" + tag + "'");
        }
    }
    if (n < 0)
        throw Error("missing 'p gcsp' header");
    if (constraints.size() != m)
        throw Error("constraint count " + std::to_string(constraints.size()) + " does not match header " + std::to_string(m));
    auto ts = std::make_shared<const TemplateSet>(t, k, std::move(templates));
    return Formula(n, ts, std::move(constraints));
}

void write_graph(std::ostream& out, const Graph& g) {
    out << "p edge " << g.num_vertices() << ' ' << g.num_edges() << '\n';
    for (auto [u, v] : g.edges())
        out << "e " << u + 1 << ' ' << v + 1 << '\n';
}

Graph read_graph(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    int n = -1;
    std::size_t m = 0;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line))
            continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "p") {
            std::string kind;
            ls >> kind >> n >> m;
            if (!ls || (kind != "edge" && kind != "col") || n < 0)
                parse_error(line_no, "expected 'p edge <n> <m>'");
        } else if (tag == "e") {
            if (n < 0)
                parse_error(line_no, "edge before the header");
            long long u, v;
            if (!(ls >> u >> v))
                parse_error(line_no, "edge line needs two endpoints");
            if (u < 1 || v < 1 || u > n || v > n)
                parse_error(line_no, "endpoint out of range");
            edges.emplace_back(static_cast<int>(u - 1), static_cast<int>(v - 1));
        } else {
            parse_error(line_no, "unknown line tag '" + tag + "'");
        }
    }
    if (n < 0)
        throw Error("missing 'p edge' header");
    if (edges.size() != m)
        throw Error("edge count " + std::to_string(edges.size()) + " does not match header " + std::to_string(m));
    return Graph(n, std::move(edges));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open '" + path + "' for writing");
    out << content;
    if (!out)
        throw Error("write to '" + path + "' failed");
}

std::string sniff_format(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (skip_line(line))
            continue;
        std::istringstream ls(line);
        std::string p, kind;
        ls >> p >> kind;
        if (p != "p")
            break;
        if (kind == "col")
            return "edge";
        return kind;
    }
    throw Error("'" + path + "' has no recognizable header");
}

} // namespace spinelab
