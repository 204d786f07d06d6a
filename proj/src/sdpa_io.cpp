#include "ccmpc/sdpa_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ccmpc {

std::string write_sdpa(const SdpProblem& problem_in) {
    if (!problem_in.equalities.empty())
        throw std::invalid_argument("write_sdpa: equality rows are not representable; eliminate them first");
    SdpProblem problem = problem_in;
    problem.canonicalize();

    std::ostringstream os;
    os.precision(17);
    os << "*offset " << problem.objective_constant << "\n";
    os << problem.num_vars << "\n";
    const bool has_diag = !problem.inequalities.empty();
    os << problem.blocks.size() + (has_diag ? 1 : 0) << "\n";
    for (std::size_t b = 0; b < problem.blocks.size(); ++b) {
        if (b) os << " ";
        os << problem.blocks[b].side;
    }
    if (has_diag) os << (problem.blocks.empty() ? "" : " ") << "-" << problem.inequalities.size();
    os << "\n";
    for (int i = 0; i < problem.num_vars; ++i) os << (i ? " " : "") << problem.objective[i];
    os << "\n";

    // Constant matrices: file convention is F(x) = sum x_i F_i - F0.
    for (std::size_t b = 0; b < problem.blocks.size(); ++b) {
        const auto& f0 = problem.blocks[b].f0;
        for (int r = 0; r < problem.blocks[b].side; ++r)
            for (int c = r; c < problem.blocks[b].side; ++c)
                if (f0(r, c) != 0.0)
                    os << "0 " << b + 1 << " " << r + 1 << " " << c + 1 << " " << -f0(r, c) << "\n";
    }
    for (std::size_t i = 0; i < problem.inequalities.size(); ++i)
        if (problem.inequalities[i].rhs != 0.0)
            os << "0 " << problem.blocks.size() + 1 << " " << i + 1 << " " << i + 1 << " "
               << problem.inequalities[i].rhs << "\n";

    for (std::size_t b = 0; b < problem.blocks.size(); ++b)
        for (const auto& t : problem.blocks[b].terms)
            os << t.var + 1 << " " << b + 1 << " " << t.row + 1 << " " << t.col + 1 << " " << t.coeff << "\n";
    for (std::size_t i = 0; i < problem.inequalities.size(); ++i)
        for (int v = 0; v < problem.num_vars; ++v)
            if (problem.inequalities[i].coeffs[v] != 0.0)
                os << v + 1 << " " << problem.blocks.size() + 1 << " " << i + 1 << " " << i + 1 << " "
                   << problem.inequalities[i].coeffs[v] << "\n";
    return os.str();
}

void write_sdpa_file(const SdpProblem& problem, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_sdpa_file: cannot open " + path);
    out << write_sdpa(problem);
}

SdpProblem read_sdpa(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    double offset = 0.0;
    std::vector<std::string> payload;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '*' || line[0] == '"') {
            std::istringstream ls(line.substr(1));
            std::string tag;
            if (ls >> tag && tag == "offset") ls >> offset;
            continue;
        }
        payload.push_back(line);
    }
    if (payload.size() < 4) throw std::invalid_argument("read_sdpa: truncated header");

    std::size_t cursor = 0;
    auto next_stream = [&]() { return std::istringstream(payload.at(cursor++)); };

    int m = 0, nblocks = 0;
    {
        auto s = next_stream();
        if (!(s >> m) || m < 1) throw std::invalid_argument("read_sdpa: bad variable count");
    }
    {
        auto s = next_stream();
        if (!(s >> nblocks) || nblocks < 1) throw std::invalid_argument("read_sdpa: bad block count");
    }
    std::vector<int> sizes;
    {
        auto s = next_stream();
        int v = 0;
        while (s >> v) sizes.push_back(v);
        if (static_cast<int>(sizes.size()) != nblocks) throw std::invalid_argument("read_sdpa: bad block size row");
    }

    SdpProblem p;
    p.num_vars = m;
    p.objective = Eigen::VectorXd::Zero(m);
    p.objective_constant = offset;
    {
        auto s = next_stream();
        for (int i = 0; i < m; ++i)
            if (!(s >> p.objective[i])) throw std::invalid_argument("read_sdpa: bad objective row");
    }

    // Diagonal blocks expand into 1x1 PSD blocks.
    std::vector<int> block_base(sizes.size(), 0);
    for (std::size_t b = 0; b < sizes.size(); ++b) {
        block_base[b] = static_cast<int>(p.blocks.size());
        if (sizes[b] > 0) {
            p.add_block(sizes[b], "sdpa" + std::to_string(b + 1));
        } else {
            for (int d = 0; d < -sizes[b]; ++d)
                p.add_block(1, "sdpa" + std::to_string(b + 1) + "d" + std::to_string(d + 1));
        }
    }

    for (; cursor < payload.size(); ++cursor) {
        std::istringstream s(payload[cursor]);
        int mat = 0, blk = 0, i = 0, j = 0;
        double v = 0.0;
        if (!(s >> mat >> blk >> i >> j >> v)) throw std::invalid_argument("read_sdpa: bad entry line");
        if (blk < 1 || blk > nblocks) throw std::invalid_argument("read_sdpa: entry block out of range");
        const bool diag = sizes[static_cast<std::size_t>(blk - 1)] < 0;
        int target = block_base[static_cast<std::size_t>(blk - 1)];
        int r = i - 1, c = j - 1;
        if (diag) {
            if (i != j) throw std::invalid_argument("read_sdpa: off-diagonal entry in a diagonal block");
            target += i - 1;
            r = c = 0;
        }
        if (mat == 0)
            p.add_block_const(target, r, c, -v);
        else
            p.add_block_term(target, mat - 1, r, c, v);
    }
    p.canonicalize();
    return p;
}

SdpProblem read_sdpa_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_sdpa_file: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_sdpa(buf.str());
}

}  // namespace ccmpc
