// Session protocol client. All algorithm logic stays on the server; this is
// a thin typed wrapper over POST /api with the state shapes the console
// renders. Nothing here predicts moves locally.

export type Node = number[];

export interface RobotView {
  id: number;
  state: "idle" | "computed" | "transit";
  node: Node | null;
  edge: [Node, Node] | null;
  pending?: Node[];
}

export interface CandidateView {
  corner: Node;
  side: Node;
  bits: string;
  elected: boolean;
}

export interface Bounds {
  D: number;
  M: number;
  N: number;
  space_square_limit: number;
  rect_limit: [number, number];
}

export interface MetricsView {
  space_square: number;
  space_rect: [number, number];
  moves_total: number;
  moves_per_role: { head: number; tail: number; inner_max: number };
  discards: number;
}

export interface SessionState {
  kind: "grid" | "line";
  robots: RobotView[];
  still: boolean;
  phase: string | null;
  conds: string | null;
  formed: boolean;
  verdict: string | null;
  violation: string | null;
  candidates: CandidateView[];
  target: Node[];
  target_nodes: Node[] | null;
  head: Node | null;
  tail: Node | null;
  nodes: Node[];
  events: number;
  bounds: Bounds;
  metrics: MetricsView;
}

export interface EnabledEvent {
  kind: "activate" | "arrive";
  robot: number;
}

export class StaleRevisionError extends Error {
  constructor(public current: number) {
    super(`stale revision; server is at ${current}`);
  }
}

export class SessionClient {
  revision = 0;
  session = "";

  constructor(private base: string) {}

  private async call(doc: Record<string, unknown>): Promise<any> {
    const resp = await fetch(`${this.base}/api`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(doc),
    });
    const body = await resp.json();
    if (resp.status === 409) {
      throw new StaleRevisionError(body.revision as number);
    }
    if (!resp.ok) {
      throw new Error(body.error ?? `server error ${resp.status}`);
    }
    if (typeof body.revision === "number") {
      this.revision = body.revision;
    }
    return body;
  }

  async create(scenario: unknown): Promise<SessionState> {
    const out = await this.call({ op: "create-session", scenario });
    this.session = out.session;
    return out.state;
  }

  async state(): Promise<SessionState> {
    const out = await this.call({ op: "get-state", session: this.session });
    return out.state;
  }

  async enabled(): Promise<EnabledEvent[]> {
    const out = await this.call({ op: "list-enabled", session: this.session });
    return out.enabled;
  }

  async apply(event: EnabledEvent, to?: Node): Promise<SessionState> {
    const doc: Record<string, unknown> = {
      op: "apply-event",
      session: this.session,
      revision: this.revision,
      event,
    };
    if (to) doc.to = to;
    const out = await this.call(doc);
    return out.state;
  }

  async autoStep(n: number, policy: string, seed: number): Promise<SessionState> {
    const out = await this.call({
      op: "auto-step", session: this.session, n, policy, seed,
    });
    return out.state;
  }

  async reset(): Promise<SessionState> {
    const out = await this.call({ op: "reset", session: this.session });
    return out.state;
  }

  async trace(): Promise<{ trace: string; verdict: string | null }> {
    const out = await this.call({ op: "get-trace", session: this.session });
    return { trace: out.trace, verdict: out.verdict };
  }
}
