import type { EdgeInfo } from './types.js';
import { byAspectId } from './state.js';

export interface NodePosition {
  id: string;
  x: number;
  y: number;
  rank: number;
}

export interface LayoutOptions {
  width: number;
  height: number;
  margin: number;
  iterations: number;
  seed: number;
}

export const DEFAULT_LAYOUT: LayoutOptions = {
  width: 1200,
  height: 720,
  margin: 70,
  iterations: 160,
  seed: 42,
};

/** Deterministic PRNG (mulberry32) so layouts are stable run to run. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Longest-path depth from the entry points; drives the x coordinate. */
export function topologicalRanks(ids: string[], edges: EdgeInfo[]): Map<string, number> {
  const incoming = new Map<string, string[]>(ids.map((id) => [id, []]));
  const outgoing = new Map<string, string[]>(ids.map((id) => [id, []]));
  for (const edge of edges) {
    incoming.get(edge.target)?.push(edge.source);
    outgoing.get(edge.source)?.push(edge.target);
  }
  const indegree = new Map(ids.map((id) => [id, incoming.get(id)!.length]));
  const rank = new Map(ids.map((id) => [id, 0]));
  const queue = ids.filter((id) => indegree.get(id) === 0).sort(byAspectId);
  while (queue.length) {
    const node = queue.shift()!;
    for (const child of outgoing.get(node)!) {
      rank.set(child, Math.max(rank.get(child)!, rank.get(node)! + 1));
      indegree.set(child, indegree.get(child)! - 1);
      if (indegree.get(child) === 0) queue.push(child);
    }
    queue.sort(byAspectId);
  }
  return rank;
}

/**
 * Force layout seeded by topological rank: entry points column-zero on
 * the left, loss states drift right, with a few relaxation passes to
 * spread rank-mates vertically. Deterministic for a given input.
 */
export function layoutGraph(
  ids: string[],
  edges: EdgeInfo[],
  options: LayoutOptions = DEFAULT_LAYOUT,
): Map<string, NodePosition> {
  const sorted = [...ids].sort(byAspectId);
  const ranks = topologicalRanks(sorted, edges);
  const maxRank = Math.max(0, ...ranks.values());
  const random = mulberry32(options.seed);

  const innerWidth = options.width - 2 * options.margin;
  const innerHeight = options.height - 2 * options.margin;
  const columnWidth = maxRank > 0 ? innerWidth / maxRank : 0;

  const positions = new Map<string, NodePosition>();
  const byRank = new Map<number, string[]>();
  for (const id of sorted) {
    const r = ranks.get(id)!;
    if (!byRank.has(r)) byRank.set(r, []);
    byRank.get(r)!.push(id);
  }
  for (const [r, members] of byRank) {
    members.forEach((id, index) => {
      const spacing = innerHeight / (members.length + 1);
      positions.set(id, {
        id,
        rank: r,
        x: options.margin + r * columnWidth + (random() - 0.5) * 12,
        y: options.margin + spacing * (index + 1) + (random() - 0.5) * 18,
      });
    });
  }

  // Vertical relaxation: pull nodes toward the mean of their neighbors,
  // repel rank-mates that get too close. X stays pinned to the rank.
  const neighbors = new Map<string, string[]>(sorted.map((id) => [id, []]));
  for (const edge of edges) {
    neighbors.get(edge.source)?.push(edge.target);
    neighbors.get(edge.target)?.push(edge.source);
  }
  const minGap = Math.min(56, innerHeight / 6);
  for (let step = 0; step < options.iterations; step += 1) {
    for (const id of sorted) {
      const node = positions.get(id)!;
      const linked = neighbors.get(id)!;
      if (linked.length) {
        const mean = linked.reduce((sum, n) => sum + positions.get(n)!.y, 0) / linked.length;
        node.y += (mean - node.y) * 0.08;
      }
      for (const other of byRank.get(node.rank)!) {
        if (other === id) continue;
        const peer = positions.get(other)!;
        const gap = node.y - peer.y;
        if (Math.abs(gap) < minGap) {
          node.y += (minGap - Math.abs(gap)) * 0.35 * (gap >= 0 ? 1 : -1);
        }
      }
      node.y = Math.min(options.height - options.margin,
        Math.max(options.margin, node.y));
    }
  }
  return positions;
}
