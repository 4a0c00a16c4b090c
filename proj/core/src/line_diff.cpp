#include "aprkit/line_diff.hpp"

#include <algorithm>
#include <optional>

namespace aprkit::diff {

namespace {

enum class Op { keep, del, ins };

std::vector<Op> edit_script(const std::vector<std::string>& a, const std::vector<std::string>& b)
{
    const auto n = static_cast<long>(a.size());
    const auto m = static_cast<long>(b.size());
    const long max = n + m;
    const long offset = max + 1;
    std::vector<long> v(static_cast<std::size_t>(2 * max + 3), 0);
    std::vector<std::vector<long>> trace;

    long found = -1;
    for (long d = 0; d <= max; ++d) {
        trace.push_back(v);
        for (long k = -d; k <= d; k += 2) {
            long x;
            if (k == -d || (k != d && v[offset + k - 1] < v[offset + k + 1]))
                x = v[offset + k + 1];
            else
                x = v[offset + k - 1] + 1;
            long y = x - k;
            while (x < n && y < m && a[x] == b[y]) {
                ++x;
                ++y;
            }
            v[offset + k] = x;
            if (x >= n && y >= m) {
                found = d;
                break;
            }
        }
        if (found >= 0)
            break;
    }

    std::vector<Op> ops;
    long x = n;
    long y = m;
    for (long d = found; d > 0; --d) {
        const auto& pv = trace[static_cast<std::size_t>(d)];
        long k = x - y;
        long prev_k;
        if (k == -d || (k != d && pv[offset + k - 1] < pv[offset + k + 1]))
            prev_k = k + 1;
        else
            prev_k = k - 1;
        long prev_x = pv[offset + prev_k];
        long prev_y = prev_x - prev_k;
        while (x > prev_x && y > prev_y) {
            ops.push_back(Op::keep);
            --x;
            --y;
        }
        ops.push_back(x == prev_x ? Op::ins : Op::del);
        x = prev_x;
        y = prev_y;
    }
    while (x > 0 && y > 0) {
        ops.push_back(Op::keep);
        --x;
        --y;
    }
    std::reverse(ops.begin(), ops.end());
    return ops;
}

}  // namespace

std::vector<ChangeBlock> diff_lines(const std::vector<std::string>& a, const std::vector<std::string>& b)
{
    std::vector<ChangeBlock> blocks;
    std::size_t i = 0;
    std::size_t j = 0;
    std::optional<ChangeBlock> open;
    for (auto op : edit_script(a, b)) {
        if (op == Op::keep) {
            if (open) {
                blocks.push_back(*open);
                open.reset();
            }
            ++i;
            ++j;
            continue;
        }
        if (!open)
            open = ChangeBlock { i, 0, j, 0 };
        if (op == Op::del) {
            ++open->a_count;
            ++i;
        } else {
            ++open->b_count;
            ++j;
        }
    }
    if (open)
        blocks.push_back(*open);
    return blocks;
}

}  // namespace aprkit::diff
