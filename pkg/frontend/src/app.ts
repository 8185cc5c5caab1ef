/**
 * Session controller: the stateful core of the UI.
 *
 * Holds the latest ViewState received from the service and notifies
 * subscribers whenever it changes. The controller never mutates parse
 * state locally: every transition round-trips through the service, and
 * the view is replaced wholesale by the response. Reduce forms are
 * validated client-side only for completeness (missing fields); all
 * legality checks stay on the server.
 */

import { ApiError, SessionClient } from "./client.js";
import type {
  AttrValue,
  CreateSessionRequest,
  FinalizeResponse,
  ReduceDecision,
  Role,
  ViewState,
} from "./types.js";

export interface ReduceForm {
  head: string;
  leftRole: Role | "";
  rightRole: Role | "";
  rre: string;
  happy?: number;
  extraAttributes?: Record<string, AttrValue>;
}

export type Listener = (view: ViewState | null, error: ApiError | null) => void;

export function validateReduceForm(form: ReduceForm): string[] {
  const problems: string[] = [];
  if (!form.head.trim()) problems.push("head is required");
  if (!form.leftRole) problems.push("left role is required");
  if (!form.rightRole) problems.push("right role is required");
  if (form.leftRole === "S" && form.rightRole === "S")
    problems.push("roles (S, S) are not an allowed pattern");
  if (!form.rre.trim()) problems.push("rre is required");
  return problems;
}

export function reduceDecision(form: ReduceForm): ReduceDecision {
  const attributes: Record<string, AttrValue> = { ...form.extraAttributes };
  if (form.happy !== undefined) attributes.happy = form.happy;
  return {
    action: "reduce",
    head: form.head.trim(),
    left_role: form.leftRole as Role,
    right_role: form.rightRole as Role,
    rre: form.rre.trim(),
    attributes,
  };
}

export class AnnotationApp {
  private view: ViewState | null = null;
  private error: ApiError | null = null;
  private formProblems: string[] = [];
  private listeners: Listener[] = [];

  constructor(private readonly client: SessionClient) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  get state(): ViewState | null {
    return this.view;
  }

  get lastError(): ApiError | null {
    return this.error;
  }

  get lastFormProblems(): string[] {
    return this.formProblems;
  }

  get sessionId(): string {
    if (this.view === null) throw new Error("no open session");
    return this.view.id;
  }

  private publish(): void {
    for (const listener of this.listeners) listener(this.view, this.error);
  }

  private accept(view: ViewState): ViewState {
    this.view = view;
    this.error = null;
    this.formProblems = [];
    this.publish();
    return view;
  }

  private fail(err: unknown): never {
    if (err instanceof ApiError) {
      this.error = err;
      this.publish();
    }
    throw err;
  }

  async open(request: CreateSessionRequest): Promise<ViewState> {
    try {
      return this.accept(await this.client.createSession(request));
    } catch (err) {
      this.fail(err);
    }
  }

  async refresh(): Promise<ViewState> {
    try {
      return this.accept(await this.client.state(this.sessionId));
    } catch (err) {
      this.fail(err);
    }
  }

  async shift(): Promise<ViewState> {
    try {
      return this.accept(
        await this.client.decide(this.sessionId, { action: "shift" }),
      );
    } catch (err) {
      this.fail(err);
    }
  }

  /** Validate the form, then submit; incomplete forms never reach the wire. */
  async reduce(form: ReduceForm): Promise<ViewState> {
    const problems = validateReduceForm(form);
    if (problems.length > 0) {
      this.formProblems = problems;
      this.publish();
      throw new ApiError("FormIncomplete", problems.join("; "), 0);
    }
    try {
      return this.accept(
        await this.client.decide(this.sessionId, reduceDecision(form)),
      );
    } catch (err) {
      this.fail(err);
    }
  }

  async undo(): Promise<ViewState> {
    try {
      return this.accept(await this.client.undo(this.sessionId));
    } catch (err) {
      this.fail(err);
    }
  }

  async finalize(): Promise<FinalizeResponse> {
    try {
      const result = await this.client.finalize(this.sessionId);
      await this.refresh();
      return result;
    } catch (err) {
      this.fail(err);
    }
  }

  exportLogText(): Promise<string> {
    return this.client.exportLogText(this.sessionId);
  }
}
