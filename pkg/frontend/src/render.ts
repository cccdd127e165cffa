// Canvas renderer: robots, in-transit edges, target ghosts, the bounding
// box, the tail's row/column guides, and the elected corner.

export interface Scene {
  nodes: number[][];
  edges: [number[], number[]][];
  targets: number[][];
  electedCorner: number[] | null;
  tail: number[] | null;
  formed: boolean;
  kind: "grid" | "line";
}

const PAD = 28;

export function drawScene(canvas: HTMLCanvasElement, scene: Scene): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);

  const pts: number[][] = [
    ...scene.nodes,
    ...scene.targets,
    ...scene.edges.flat(),
  ].map((p) => (p.length === 1 ? [p[0], 0] : p));
  if (pts.length === 0) return;

  const xs = pts.map((p) => p[0]);
  const ys = pts.map((p) => p[1]);
  const minX = Math.min(...xs) - 1;
  const maxX = Math.max(...xs) + 1;
  const minY = Math.min(...ys) - 1;
  const maxY = Math.max(...ys) + 1;
  const cell = Math.min(
    (canvas.width - 2 * PAD) / (maxX - minX + 1),
    (canvas.height - 2 * PAD) / (maxY - minY + 1),
    34,
  );
  const px = (p: number[]) => {
    const x = p[0];
    const y = p.length > 1 ? p[1] : 0;
    return [
      PAD + (x - minX) * cell + cell / 2,
      canvas.height - PAD - (y - minY) * cell - cell / 2,
    ];
  };

  // lattice
  ctx.strokeStyle = "#e4e4ec";
  ctx.lineWidth = 1;
  for (let x = minX; x <= maxX; x++) {
    const [ax] = px([x, minY]);
    ctx.beginPath();
    ctx.moveTo(ax, px([x, minY])[1]);
    ctx.lineTo(ax, px([x, maxY])[1]);
    ctx.stroke();
  }
  for (let y = minY; y <= maxY; y++) {
    const [, ay] = px([minX, y]);
    ctx.beginPath();
    ctx.moveTo(px([minX, y])[0], ay);
    ctx.lineTo(px([maxX, y])[0], ay);
    ctx.stroke();
  }

  // bounding box of the robots
  const occ = scene.nodes.map((p) => (p.length === 1 ? [p[0], 0] : p));
  if (occ.length) {
    const bx0 = Math.min(...occ.map((p) => p[0]));
    const bx1 = Math.max(...occ.map((p) => p[0]));
    const by0 = Math.min(...occ.map((p) => p[1]));
    const by1 = Math.max(...occ.map((p) => p[1]));
    const [x0, y0] = px([bx0, by1]);
    const [x1, y1] = px([bx1, by0]);
    ctx.strokeStyle = "#b7c4d8";
    ctx.setLineDash([5, 4]);
    ctx.strokeRect(x0 - cell / 2, y0 - cell / 2, x1 - x0 + cell, y1 - y0 + cell);
    ctx.setLineDash([]);

    // tail guides: its row and column
    if (scene.tail) {
      const t = scene.tail.length === 1 ? [scene.tail[0], 0] : scene.tail;
      ctx.strokeStyle = "#f2c06b";
      ctx.setLineDash([2, 4]);
      const [tx, ty] = px(t);
      ctx.beginPath();
      ctx.moveTo(px([minX, t[1]])[0], ty);
      ctx.lineTo(px([maxX, t[1]])[0], ty);
      ctx.stroke();
      ctx.beginPath();
      ctx.moveTo(tx, px([t[0], minY])[1]);
      ctx.lineTo(tx, px([t[0], maxY])[1]);
      ctx.stroke();
      ctx.setLineDash([]);
    }
  }

  // target ghosts
  for (const t of scene.targets) {
    const [x, y] = px(t);
    ctx.strokeStyle = scene.formed ? "#3c9d58" : "#8f8fb0";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.arc(x, y, cell * 0.32, 0, Math.PI * 2);
    ctx.stroke();
  }

  // in-transit edges
  for (const [a, b] of scene.edges) {
    const [ax, ay] = px(a);
    const [bx, by] = px(b);
    ctx.strokeStyle = "#d2604a";
    ctx.lineWidth = 4;
    ctx.beginPath();
    ctx.moveTo(ax, ay);
    ctx.lineTo(bx, by);
    ctx.stroke();
    ctx.fillStyle = "#d2604a";
    ctx.beginPath();
    ctx.arc((ax + bx) / 2, (ay + by) / 2, cell * 0.22, 0, Math.PI * 2);
    ctx.fill();
  }

  // robots
  for (const p of scene.nodes) {
    const [x, y] = px(p);
    ctx.fillStyle = scene.formed ? "#3c9d58" : "#3a6ea5";
    ctx.beginPath();
    ctx.arc(x, y, cell * 0.3, 0, Math.PI * 2);
    ctx.fill();
  }

  // elected corner
  if (scene.electedCorner) {
    const [x, y] = px(scene.electedCorner);
    ctx.strokeStyle = "#c23b80";
    ctx.lineWidth = 2.5;
    ctx.strokeRect(x - cell * 0.42, y - cell * 0.42, cell * 0.84, cell * 0.84);
  }
}
