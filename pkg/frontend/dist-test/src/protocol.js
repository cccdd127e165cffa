// Session protocol client. All algorithm logic stays on the server; this is
// a thin typed wrapper over POST /api with the state shapes the console
// renders. Nothing here predicts moves locally.
export class StaleRevisionError extends Error {
    current;
    constructor(current) {
        super(`stale revision; server is at ${current}`);
        this.current = current;
    }
}
export class SessionClient {
    base;
    revision = 0;
    session = "";
    constructor(base) {
        this.base = base;
    }
    async call(doc) {
        const resp = await fetch(`${this.base}/api`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(doc),
        });
        const body = await resp.json();
        if (resp.status === 409) {
            throw new StaleRevisionError(body.revision);
        }
        if (!resp.ok) {
            throw new Error(body.error ?? `server error ${resp.status}`);
        }
        if (typeof body.revision === "number") {
            this.revision = body.revision;
        }
        return body;
    }
    async create(scenario) {
        const out = await this.call({ op: "create-session", scenario });
        this.session = out.session;
        return out.state;
    }
    async state() {
        const out = await this.call({ op: "get-state", session: this.session });
        return out.state;
    }
    async enabled() {
        const out = await this.call({ op: "list-enabled", session: this.session });
        return out.enabled;
    }
    async apply(event, to) {
        const doc = {
            op: "apply-event",
            session: this.session,
            revision: this.revision,
            event,
        };
        if (to)
            doc.to = to;
        const out = await this.call(doc);
        return out.state;
    }
    async autoStep(n, policy, seed) {
        const out = await this.call({
            op: "auto-step", session: this.session, n, policy, seed,
        });
        return out.state;
    }
    async reset() {
        const out = await this.call({ op: "reset", session: this.session });
        return out.state;
    }
    async trace() {
        const out = await this.call({ op: "get-trace", session: this.session });
        return { trace: out.trace, verdict: out.verdict };
    }
}
