#include "permix/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace permix {

StochasticMatrix StochasticMatrix::from_triplets(int n, std::vector<Triplet> entries) {
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    StochasticMatrix M;
    M.n = n;
    M.row_ptr.assign(n + 1, 0);
    for (size_t i = 0; i < entries.size();) {
        size_t j = i;
        double s = 0.0;
        while (j < entries.size() && entries[j].row == entries[i].row &&
               entries[j].col == entries[i].col) {
            s += entries[j].val;
            ++j;
        }
        if (entries[i].row < 0 || entries[i].row >= n || entries[i].col < 0 ||
            entries[i].col >= n)
            throw std::invalid_argument("from_triplets: index out of range");
        if (s != 0.0) {
            M.col.push_back(entries[i].col);
            M.val.push_back(s);
            ++M.row_ptr[entries[i].row + 1];
        }
        i = j;
    }
    for (int i = 0; i < n; ++i) M.row_ptr[i + 1] += M.row_ptr[i];
    return M;
}

double StochasticMatrix::row_sum(int i) const {
    double s = 0.0;
    for (int k = row_begin(i); k < row_end(i); ++k) s += val[k];
    return s;
}

double StochasticMatrix::at(int i, int j) const {
    for (int k = row_begin(i); k < row_end(i); ++k)
        if (col[k] == j) return val[k];
    return 0.0;
}

void StochasticMatrix::validate_stochastic(double tol) const {
    for (int i = 0; i < n; ++i) {
        if (std::abs(row_sum(i) - 1.0) > tol)
            throw std::invalid_argument("row " + std::to_string(i) +
                                        " does not sum to 1 within tolerance");
        for (int k = row_begin(i); k < row_end(i); ++k)
            if (val[k] < 0.0)
                throw std::invalid_argument("negative entry in row " + std::to_string(i));
    }
}

void left_multiply(const StochasticMatrix& K, const std::vector<double>& mu,
                   std::vector<double>& out) {
    out.assign(K.n, 0.0);
    for (int i = 0; i < K.n; ++i) {
        double m = mu[i];
        if (m == 0.0) continue;
        for (int k = K.row_begin(i); k < K.row_end(i); ++k) out[K.col[k]] += m * K.val[k];
    }
}

std::vector<std::vector<double>> to_dense(const StochasticMatrix& K) {
    std::vector<std::vector<double>> D(K.n, std::vector<double>(K.n, 0.0));
    for (int i = 0; i < K.n; ++i)
        for (int k = K.row_begin(i); k < K.row_end(i); ++k) D[i][K.col[k]] += K.val[k];
    return D;
}

StochasticMatrix dense_to_sparse(const std::vector<std::vector<double>>& D,
                                 double drop_tol) {
    int n = int(D.size());
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (std::abs(D[i][j]) > drop_tol) t.push_back({i, j, D[i][j]});
    return StochasticMatrix::from_triplets(n, std::move(t));
}

// Iterative Tarjan (explicit stack; kernels at n=24576 would blow recursion).
SccResult strongly_connected_components(const StochasticMatrix& K) {
    int n = K.n;
    std::vector<int> index(n, -1), low(n, 0), on_stack(n, 0);
    std::vector<int> stack;
    SccResult res;
    res.comp_of.assign(n, -1);
    int next_index = 0;

    struct Frame {
        int v;
        int edge;
    };
    std::vector<Frame> call;
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.push_back({root, K.row_begin(root)});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge < K.row_end(f.v)) {
                int w = K.col[f.edge++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, K.row_begin(w)});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                int v = f.v;
                call.pop_back();
                if (low[v] == index[v]) {
                    res.members.emplace_back();
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        res.comp_of[w] = res.count;
                        res.members.back().push_back(w);
                    } while (w != v);
                    ++res.count;
                }
                if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
        }
    }
    // A component is recurrent (closed) iff no edge leaves it.
    res.is_recurrent.assign(res.count, 1);
    for (int i = 0; i < n; ++i)
        for (int k = K.row_begin(i); k < K.row_end(i); ++k)
            if (res.comp_of[K.col[k]] != res.comp_of[i]) res.is_recurrent[res.comp_of[i]] = 0;
    return res;
}

} // namespace permix
