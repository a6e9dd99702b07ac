#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace dw::detail
{
  /// Iterative Tarjan.  Returns the component index of every node;
  /// components are numbered in reverse topological order.
  inline std::vector<std::size_t>
  strongly_connected(std::size_t n,
                     const std::function<const std::vector<std::size_t>&(std::size_t)>& succ,
                     std::size_t& count)
  {
    const std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, none), low(n, 0), comp(n, none);
    std::vector<std::size_t> stack;
    std::vector<bool> on_stack(n, false);
    std::size_t next = 0;
    count = 0;
    struct Frame
    {
      std::size_t v;
      std::size_t edge;
    };
    std::vector<Frame> call;
    for (std::size_t root = 0; root < n; ++root)
      {
        if (index[root] != none)
          continue;
        call.push_back({root, 0});
        index[root] = low[root] = next++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty())
          {
            Frame& f = call.back();
            const auto& out = succ(f.v);
            if (f.edge < out.size())
              {
                std::size_t w = out[f.edge++];
                if (index[w] == none)
                  {
                    index[w] = low[w] = next++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                  }
                else if (on_stack[w])
                  low[f.v] = std::min(low[f.v], index[w]);
                continue;
              }
            std::size_t v = f.v;
            call.pop_back();
            if (!call.empty())
              low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v])
              {
                std::size_t w;
                do
                  {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = count;
                  }
                while (w != v);
                ++count;
              }
          }
      }
    return comp;
  }

  /// Whether a component contains a cycle (size > 1 or a self-loop).
  inline std::vector<bool>
  nontrivial_components(std::size_t n,
                        const std::function<const std::vector<std::size_t>&(std::size_t)>& succ,
                        const std::vector<std::size_t>& comp, std::size_t count)
  {
    std::vector<std::size_t> size(count, 0);
    std::vector<bool> cyclic(count, false);
    for (std::size_t v = 0; v < n; ++v)
      ++size[comp[v]];
    for (std::size_t v = 0; v < n; ++v)
      {
        if (size[comp[v]] > 1)
          cyclic[comp[v]] = true;
        for (auto w : succ(v))
          if (w == v)
            cyclic[comp[v]] = true;
      }
    return cyclic;
  }
}
