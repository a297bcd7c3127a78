// Deterministic force-directed layout. The PRNG is seeded from the map's
// (center, depth) pair, so the same map renders in the same place on every
// visit; no randomness leaks in from Math.random.

export interface Point {
  x: number;
  y: number;
}

function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const ITERATIONS = 200;
const INITIAL_TEMPERATURE = 0.12;

export function layoutPositions(
  center: string,
  depth: number,
  nodeKeys: string[],
  edges: [string, string][],
  width: number,
  height: number,
): Map<string, Point> {
  const keys = [...nodeKeys].sort();
  const rng = mulberry32(fnv1a(`${center}:${depth}`));
  // the simulation converges to a near-identical equilibrium from any start,
  // so the seed's visible effect is a whole-map rotation about the center
  const rotation = rng() * 2 * Math.PI;
  const positions = new Map<string, Point>();
  const count = keys.length;
  const radius = 0.35;

  keys.forEach((key, i) => {
    if (key === center) {
      positions.set(key, { x: 0.5, y: 0.5 });
      return;
    }
    const angle = (2 * Math.PI * i) / Math.max(1, count) + rng() * 0.5;
    const r = radius * (0.6 + 0.4 * rng());
    positions.set(key, { x: 0.5 + r * Math.cos(angle), y: 0.5 + r * Math.sin(angle) });
  });

  if (count > 1) {
    const ideal = 0.9 / Math.sqrt(count);
    const index = new Map(keys.map((k, i) => [k, i]));
    const xs = keys.map((k) => positions.get(k)!.x);
    const ys = keys.map((k) => positions.get(k)!.y);
    const edgePairs = edges
      .filter(([a, b]) => index.has(a) && index.has(b))
      .map(([a, b]) => [index.get(a)!, index.get(b)!] as const);
    const centerIndex = index.get(center);

    for (let step = 0; step < ITERATIONS; step++) {
      const temperature = INITIAL_TEMPERATURE * (1 - step / ITERATIONS);
      const dx = new Array<number>(count).fill(0);
      const dy = new Array<number>(count).fill(0);

      for (let i = 0; i < count; i++) {
        for (let j = i + 1; j < count; j++) {
          let vx = xs[i] - xs[j];
          let vy = ys[i] - ys[j];
          let dist = Math.hypot(vx, vy);
          if (dist < 1e-6) {
            // deterministic nudge for coincident nodes
            vx = 1e-3 * (1 + i);
            vy = 1e-3 * (1 + j);
            dist = Math.hypot(vx, vy);
          }
          const repulsion = (ideal * ideal) / dist;
          dx[i] += (vx / dist) * repulsion;
          dy[i] += (vy / dist) * repulsion;
          dx[j] -= (vx / dist) * repulsion;
          dy[j] -= (vy / dist) * repulsion;
        }
      }

      for (const [i, j] of edgePairs) {
        const vx = xs[i] - xs[j];
        const vy = ys[i] - ys[j];
        const dist = Math.max(1e-6, Math.hypot(vx, vy));
        const attraction = (dist * dist) / ideal;
        dx[i] -= (vx / dist) * attraction;
        dy[i] -= (vy / dist) * attraction;
        dx[j] += (vx / dist) * attraction;
        dy[j] += (vy / dist) * attraction;
      }

      for (let i = 0; i < count; i++) {
        if (i === centerIndex) continue;
        // light gravity keeps disconnected nodes on screen
        dx[i] += (0.5 - xs[i]) * 0.05;
        dy[i] += (0.5 - ys[i]) * 0.05;
        const magnitude = Math.hypot(dx[i], dy[i]);
        if (magnitude > 0) {
          const limited = Math.min(magnitude, temperature);
          xs[i] += (dx[i] / magnitude) * limited;
          ys[i] += (dy[i] / magnitude) * limited;
        }
        xs[i] = Math.min(0.95, Math.max(0.05, xs[i]));
        ys[i] = Math.min(0.95, Math.max(0.05, ys[i]));
      }
    }

    keys.forEach((key, i) => positions.set(key, { x: xs[i], y: ys[i] }));
  }

  const cos = Math.cos(rotation);
  const sin = Math.sin(rotation);
  const scaled = new Map<string, Point>();
  for (const [key, point] of positions) {
    let { x, y } = point;
    if (key !== center) {
      const rx = (x - 0.5) * cos - (y - 0.5) * sin;
      const ry = (x - 0.5) * sin + (y - 0.5) * cos;
      x = Math.min(0.97, Math.max(0.03, 0.5 + rx));
      y = Math.min(0.97, Math.max(0.03, 0.5 + ry));
    }
    scaled.set(key, { x: x * width, y: y * height });
  }
  return scaled;
}
